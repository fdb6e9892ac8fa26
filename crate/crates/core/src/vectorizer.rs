//! Term-frequency / inverse-document-frequency features.
//!
//! Each document is a single corpus token, so `|D|` is the number of training
//! tokens and the document frequency of a term is its corpus frequency. The
//! counting itself is general: a document string is split on whitespace and
//! every vocabulary term it contains is counted.
//!
//! The idf weight is the smoothed form
//!
//! ```text
//! idf(t) = ln((|D| + 1) / (1 + df(t))) + 1
//! ```
//!
//! and every transformed row is scaled to unit L2 norm. Rows of documents with
//! no in-vocabulary term stay zero.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Sorted, deduplicated list of terms. Column `i` of every feature vector
/// refers to `terms()[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary from arbitrary terms (sorted by code point, duplicates dropped).
    pub fn new<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut terms: Vec<String> = terms.into_iter().map(Into::into).collect();
        terms.sort_unstable();
        terms.dedup();
        Vocabulary { terms }
    }

    /// Accepts terms that are already strictly increasing.
    pub fn from_sorted(terms: Vec<String>) -> Result<Self> {
        if let Some(w) = terms.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "vocabulary not strictly sorted at {:?}, {:?}",
                w[0], w[1]
            )));
        }
        Ok(Vocabulary { terms })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        // String ordering is byte order, which for UTF-8 is code point order.
        self.terms
            .binary_search_by(|probe| probe.as_str().cmp(term))
            .ok()
    }
}

/// Sparse row: strictly increasing columns, nonzero weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
    dim: usize,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        SparseVector {
            entries: Vec::new(),
            dim,
        }
    }

    /// Sorts `entries` by column and drops explicit zeros. Duplicate or
    /// out-of-range columns are rejected.
    pub fn new(dim: usize, mut entries: Vec<(usize, f64)>) -> Result<Self> {
        entries.retain(|&(_, w)| w != 0.0);
        entries.sort_by_key(|&(c, _)| c);
        if let Some(&(c, _)) = entries.iter().find(|&&(c, _)| c >= dim) {
            return Err(Error::InvalidArgument(format!(
                "column {c} out of range for dimension {dim}"
            )));
        }
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(
                "duplicate column in sparse vector".into(),
            ));
        }
        if entries.iter().any(|&(_, w)| !w.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sparse weight".into()));
        }
        Ok(SparseVector { entries, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn get(&self, column: usize) -> f64 {
        self.entries
            .binary_search_by_key(&column, |&(c, _)| c)
            .map_or(0.0, |i| self.entries[i].1)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.dim];
        for &(c, w) in &self.entries {
            dense[c] = w;
        }
        dense
    }
}

/// Rows of L2-normalized tf-idf weights sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfMatrix {
    rows: Vec<SparseVector>,
    dim: usize,
}

impl TfIdfMatrix {
    pub fn new(dim: usize, rows: Vec<SparseVector>) -> Result<Self> {
        if let Some(row) = rows.iter().find(|r| r.dim != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.dim,
            });
        }
        Ok(TfIdfMatrix { rows, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Raw counts of each vocabulary term in `doc`.
pub fn term_frequency(doc: &str, vocab: &Vocabulary) -> SparseVector {
    let mut entries: Vec<(usize, f64)> = Vec::new();
    for term in doc.split_whitespace() {
        if let Some(col) = vocab.column(term) {
            entries.push((col, 1.0));
        }
    }
    entries.sort_by_key(|&(c, _)| c);
    entries.dedup_by(|next, kept| {
        if next.0 == kept.0 {
            kept.1 += 1.0;
            true
        } else {
            false
        }
    });
    SparseVector {
        entries,
        dim: vocab.len(),
    }
}

/// Smoothed idf weight of each vocabulary term over `docs`.
pub fn compute_idf<S: AsRef<str>>(docs: &[S], vocab: &Vocabulary) -> Vec<f64> {
    let mut df = vec![0usize; vocab.len()];
    for doc in docs {
        for &(col, _) in term_frequency(doc.as_ref(), vocab).entries() {
            df[col] += 1;
        }
    }
    let n_docs = docs.len() as f64;
    df.into_iter()
        .map(|d| ((n_docs + 1.0) / (1.0 + d as f64)).ln() + 1.0)
        .collect()
}

/// Divides every weight by the vector's L2 norm; the zero vector is returned unchanged.
pub fn l2_normalize(v: &SparseVector) -> SparseVector {
    let norm = v.norm();
    if norm == 0.0 {
        return v.clone();
    }
    SparseVector {
        entries: v.entries.iter().map(|&(c, w)| (c, w / norm)).collect(),
        dim: v.dim,
    }
}

/// Vocabulary and idf weights frozen at fit time.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedVectorizer {
    vocab: Vocabulary,
    idf: Vec<f64>,
    n_docs: usize,
}

impl FittedVectorizer {
    pub fn fit<S: AsRef<str>>(docs: &[S]) -> Result<Self> {
        if docs.is_empty() {
            return Err(Error::Fit(
                "cannot fit a vectorizer on zero documents".into(),
            ));
        }
        let vocab = Vocabulary::new(docs.iter().flat_map(|d| d.as_ref().split_whitespace()));
        let idf = compute_idf(docs, &vocab);
        Ok(FittedVectorizer {
            vocab,
            idf,
            n_docs: docs.len(),
        })
    }

    /// Reassembles a vectorizer from persisted parts.
    pub fn from_parts(vocab: Vocabulary, idf: Vec<f64>, n_docs: usize) -> Result<Self> {
        if idf.len() != vocab.len() {
            return Err(Error::InvalidArgument(format!(
                "{} idf weights for {} vocabulary terms",
                idf.len(),
                vocab.len()
            )));
        }
        if let Some(w) = idf.iter().find(|w| !(w.is_finite() && **w >= 1.0)) {
            return Err(Error::InvalidArgument(format!("idf weight {w} is below 1")));
        }
        Ok(FittedVectorizer { vocab, idf, n_docs })
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn n_features(&self) -> usize {
        self.vocab.len()
    }

    pub fn transform_one(&self, doc: &str) -> SparseVector {
        let mut v = term_frequency(doc, &self.vocab);
        for (col, w) in v.entries.iter_mut() {
            *w *= self.idf[*col];
        }
        l2_normalize(&v)
    }

    pub fn transform<S: AsRef<str> + Sync>(&self, docs: &[S]) -> TfIdfMatrix {
        let rows = docs
            .par_iter()
            .map(|d| self.transform_one(d.as_ref()))
            .collect();
        TfIdfMatrix {
            rows,
            dim: self.vocab.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn vocab(terms: &[&str]) -> Vocabulary {
        Vocabulary::new(terms.iter().copied())
    }

    #[test]
    fn vocabulary_is_sorted_and_deduplicated() {
        let v = vocab(&["b", "a", "b", "ಕ", "z"]);
        assert_eq!(v.terms(), ["a", "b", "z", "ಕ"]);
        assert_eq!(v.column("z"), Some(2));
        assert_eq!(v.column("q"), None);
        assert!(Vocabulary::from_sorted(vec!["b".into(), "a".into()]).is_err());
        assert!(Vocabulary::from_sorted(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn term_frequency_examples() {
        let mut terms: Vec<String> = (0..7).map(|i| format!("a{i}")).collect();
        terms.push("ಅಮೆರಿಕ".into());
        let v = Vocabulary::from_sorted(terms).unwrap();
        assert_eq!(v.column("ಅಮೆರಿಕ"), Some(7));
        assert_eq!(term_frequency("ಅಮೆರಿಕ", &v).entries(), &[(7, 1.0)]);
        assert!(term_frequency("zzz", &v).is_zero());

        let v = vocab(&["ಕರ್ನಾಟಕ", "ಶಿವಮೊಗ್ಗ"]);
        assert_eq!(term_frequency("ಕರ್ನಾಟಕ", &v).entries(), &[(0, 1.0)]);
        assert_eq!(
            term_frequency("ಶಿವಮೊಗ್ಗ ಕರ್ನಾಟಕ ಶಿವಮೊಗ್ಗ", &v).entries(),
            &[(0, 1.0), (1, 2.0)]
        );
    }

    #[test]
    fn idf_examples() {
        let docs = ["a", "b", "a"];
        let v = vocab(&["a", "b"]);
        let idf = compute_idf(&docs, &v);
        assert!((idf[0] - 1.287_682_072_451_780_9).abs() < 1e-15);
        assert!((idf[0] - ((4.0f64 / 3.0).ln() + 1.0)).abs() < 1e-15);
        assert!((idf[1] - (2.0f64.ln() + 1.0)).abs() < 1e-15);

        assert_eq!(compute_idf(&["a", "a", "a"], &vocab(&["a"])), vec![1.0]);
        assert_eq!(compute_idf(&["a"], &vocab(&["a"])), vec![1.0]);
    }

    #[test]
    fn fit_examples() {
        let fv = FittedVectorizer::fit(&["b", "a", "b"]).unwrap();
        assert_eq!(fv.vocab().terms(), ["a", "b"]);
        assert_eq!(fv.n_docs(), 3);

        let fv = FittedVectorizer::fit(&["x"]).unwrap();
        assert_eq!(fv.vocab().terms(), ["x"]);
        assert_eq!(fv.idf(), &[1.0]);

        let empty: [&str; 0] = [];
        assert!(matches!(FittedVectorizer::fit(&empty), Err(Error::Fit(_))));
    }

    #[test]
    fn transform_examples() {
        let docs = ["a", "b", "a"];
        let fv = FittedVectorizer::fit(&docs).unwrap();
        let m = fv.transform(&docs);
        assert_eq!(m.dim(), 2);
        let rows: Vec<&[(usize, f64)]> = m.rows().iter().map(|r| r.entries()).collect();
        assert_eq!(
            rows,
            vec![&[(0, 1.0)][..], &[(1, 1.0)][..], &[(0, 1.0)][..]]
        );

        let oov = fv.transform(&["zzz"]);
        assert!(oov.rows()[0].is_zero());
        assert_eq!(oov.rows()[0].dim(), 2);
    }

    #[test]
    fn l2_normalize_examples() {
        let v = SparseVector::new(2, vec![(0, 3.0), (1, 4.0)]).unwrap();
        let n = l2_normalize(&v);
        assert!((n.get(0) - 0.6).abs() < 1e-15 && (n.get(1) - 0.8).abs() < 1e-15);
        assert_eq!(
            l2_normalize(&SparseVector::zeros(4)),
            SparseVector::zeros(4)
        );
        let v = SparseVector::new(3, vec![(2, 5.0)]).unwrap();
        assert_eq!(l2_normalize(&v).entries(), &[(2, 1.0)]);
    }

    #[test]
    fn sparse_vector_validation() {
        let v = SparseVector::new(4, vec![(3, 1.0), (0, 0.0), (1, 2.0)]).unwrap();
        assert_eq!(v.entries(), &[(1, 2.0), (3, 1.0)]);
        assert_eq!(v.to_dense(), vec![0.0, 2.0, 0.0, 1.0]);
        assert!(SparseVector::new(2, vec![(2, 1.0)]).is_err());
        assert!(SparseVector::new(2, vec![(1, 1.0), (1, 2.0)]).is_err());
        assert!(TfIdfMatrix::new(3, vec![SparseVector::zeros(2)]).is_err());
    }

    #[test]
    fn from_parts_checks_lengths() {
        let v = vocab(&["a"]);
        assert!(FittedVectorizer::from_parts(v.clone(), vec![], 1).is_err());
        assert!(FittedVectorizer::from_parts(v.clone(), vec![0.5], 1).is_err());
        assert!(FittedVectorizer::from_parts(v, vec![1.0], 1).is_ok());
    }

    fn doc_strategy() -> impl Strategy<Value = Vec<String>> {
        proptest::collection::vec(0u8..20, 1..50)
            .prop_map(|ids| ids.into_iter().map(|i| format!("t{i}")).collect())
    }

    proptest! {
        #[test]
        fn idf_matches_direct_formula(docs in doc_strategy()) {
            let fv = FittedVectorizer::fit(&docs).unwrap();
            let mut df: HashMap<&str, usize> = HashMap::new();
            for d in &docs {
                *df.entry(d.as_str()).or_default() += 1;
            }
            let n = docs.len() as f64;
            for (term, idf) in fv.vocab().terms().iter().zip(fv.idf()) {
                let expected = ((n + 1.0) / (1.0 + df[term.as_str()] as f64)).ln() + 1.0;
                prop_assert!((idf - expected).abs() <= 1e-12);
                prop_assert!(*idf >= 1.0);
                prop_assert_eq!(*idf == 1.0, df[term.as_str()] == docs.len());
            }
        }

        #[test]
        fn idf_decreases_with_document_frequency(docs in doc_strategy()) {
            let fv = FittedVectorizer::fit(&docs).unwrap();
            let terms = fv.vocab().terms();
            let df = |t: &str| docs.iter().filter(|d| d.as_str() == t).count();
            for i in 0..terms.len() {
                for j in 0..terms.len() {
                    if df(&terms[i]) < df(&terms[j]) {
                        prop_assert!(fv.idf()[i] > fv.idf()[j]);
                    }
                }
            }
        }

        #[test]
        fn transformed_rows_are_unit_or_zero(
            train in doc_strategy(),
            queries in proptest::collection::vec("[a-z0-9 ]{0,12}", 0..30),
        ) {
            let fv = FittedVectorizer::fit(&train).unwrap();
            let before = fv.clone();
            let m = fv.transform(&queries);
            prop_assert_eq!(m.len(), queries.len());
            for row in m.rows() {
                prop_assert!(row.is_zero() || (row.norm() - 1.0).abs() <= 1e-9);
                prop_assert_eq!(row.dim(), fv.n_features());
            }
            prop_assert_eq!(before, fv);
        }

        #[test]
        fn fit_is_deterministic(docs in doc_strategy()) {
            let a = FittedVectorizer::fit(&docs).unwrap();
            let b = FittedVectorizer::fit(&docs).unwrap();
            prop_assert_eq!(a.vocab(), b.vocab());
            let bits = |f: &FittedVectorizer| f.idf().iter().map(|w| w.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&a), bits(&b));
        }
    }
}
