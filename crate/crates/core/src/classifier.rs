//! Multinomial naive Bayes over (fractional) tf-idf weights.
//!
//! Training accumulates, per class `j` and feature `i`, the summed weight
//! `S_ji` of that feature over the class's rows. With additive smoothing
//! `alpha` the conditional is
//!
//! ```text
//! P(x_i | y_j) = (S_ji + alpha) / (S_j + alpha * n_features)
//! ```
//!
//! Decoding picks `argmax_j  ln P(y_j) + sum_i x_i * ln P(x_i | y_j)`, which is
//! the product rule evaluated in log space with feature weights as exponents.
//! Ties go to the lowest class index.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vectorizer::{SparseVector, TfIdfMatrix};

pub const DEFAULT_ALPHA: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    n_classes: usize,
    n_features: usize,
    alpha: f64,
    log_prior: Vec<f64>,
    // n_classes x n_features, row-major
    log_likelihood: Vec<f64>,
    // per class, the log likelihood of a feature never seen with that class
    log_floor: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: usize,
    /// Unnormalized log posterior per class.
    pub log_scores: Vec<f64>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "smoothing alpha must be positive and finite, got {alpha}"
        )))
    }
}

impl NbModel {
    /// Fits class priors and smoothed per-class feature likelihoods.
    ///
    /// Classes with no training rows get a `-inf` log prior and uniform
    /// likelihoods, so they can never win a prediction but do not abort
    /// training on small folds.
    pub fn fit(x: &TfIdfMatrix, y: &[usize], alpha: f64, n_classes: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if x.is_empty() {
            return Err(Error::Fit("no training rows".into()));
        }
        if x.len() != y.len() {
            return Err(Error::Fit(format!(
                "{} rows but {} labels",
                x.len(),
                y.len()
            )));
        }
        if n_classes == 0 {
            return Err(Error::Fit("need at least one class".into()));
        }
        let n_features = x.dim();
        if n_features == 0 {
            return Err(Error::Fit("feature space is empty".into()));
        }
        if let Some(&bad) = y.iter().find(|&&l| l >= n_classes) {
            return Err(Error::Fit(format!("label {bad} outside 0..{n_classes}")));
        }

        let mut class_count = vec![0usize; n_classes];
        let mut sums = vec![0.0f64; n_classes * n_features];
        for (row, &label) in x.rows().iter().zip(y) {
            class_count[label] += 1;
            let class_sums = &mut sums[label * n_features..(label + 1) * n_features];
            for &(col, w) in row.entries() {
                class_sums[col] += w;
            }
        }

        let n_rows = y.len() as f64;
        let mut log_prior = Vec::with_capacity(n_classes);
        let mut log_floor = Vec::with_capacity(n_classes);
        let uniform = (1.0 / n_features as f64).ln();
        for (j, &count) in class_count.iter().enumerate() {
            let class_sums = &mut sums[j * n_features..(j + 1) * n_features];
            if count == 0 {
                log_prior.push(f64::NEG_INFINITY);
                log_floor.push(uniform);
                class_sums.fill(uniform);
                continue;
            }
            log_prior.push((count as f64 / n_rows).ln());
            let total: f64 = class_sums.iter().sum();
            let denom = total + alpha * n_features as f64;
            log_floor.push((alpha / denom).ln());
            for s in class_sums.iter_mut() {
                *s = ((*s + alpha) / denom).ln();
            }
        }

        Ok(NbModel {
            n_classes,
            n_features,
            alpha,
            log_prior,
            log_likelihood: sums,
            log_floor,
        })
    }

    /// Rebuilds a model from persisted parameters, checking shapes.
    pub fn from_parts(
        alpha: f64,
        log_prior: Vec<f64>,
        log_likelihood: Vec<f64>,
        log_floor: Vec<f64>,
        n_features: usize,
    ) -> Result<Self> {
        check_alpha(alpha)?;
        let n_classes = log_prior.len();
        if n_classes == 0 || n_features == 0 {
            return Err(Error::InvalidArgument(
                "model has no classes or no features".into(),
            ));
        }
        if log_likelihood.len() != n_classes * n_features || log_floor.len() != n_classes {
            return Err(Error::InvalidArgument(format!(
                "likelihood table does not match {n_classes} classes x {n_features} features"
            )));
        }
        if log_likelihood
            .iter()
            .chain(&log_floor)
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidArgument("non-finite log likelihood".into()));
        }
        if log_prior.iter().any(|p| p.is_nan() || *p > 0.0) {
            return Err(Error::InvalidArgument("log prior must be <= 0".into()));
        }
        Ok(NbModel {
            n_classes,
            n_features,
            alpha,
            log_prior,
            log_likelihood,
            log_floor,
        })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    /// Log likelihoods of every feature for `class`.
    pub fn class_log_likelihood(&self, class: usize) -> &[f64] {
        &self.log_likelihood[class * self.n_features..(class + 1) * self.n_features]
    }

    /// Log likelihood assigned to features with zero summed weight in `class`.
    pub fn log_floor(&self, class: usize) -> f64 {
        self.log_floor[class]
    }

    pub fn predict_log_scores(&self, x: &SparseVector) -> Result<Vec<f64>> {
        if x.dim() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                found: x.dim(),
            });
        }
        Ok((0..self.n_classes)
            .map(|j| {
                let ll = self.class_log_likelihood(j);
                let mut acc = 0.0;
                for &(col, w) in x.entries() {
                    acc += w * ll[col];
                }
                self.log_prior[j] + acc
            })
            .collect())
    }

    pub fn predict(&self, x: &SparseVector) -> Result<Prediction> {
        let log_scores = self.predict_log_scores(x)?;
        Ok(Prediction {
            label: argmax(&log_scores),
            log_scores,
        })
    }

    pub fn predict_batch(&self, x: &TfIdfMatrix) -> Result<Vec<Prediction>> {
        if x.dim() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                found: x.dim(),
            });
        }
        x.rows().par_iter().map(|row| self.predict(row)).collect()
    }

    pub fn predict_labels(&self, x: &TfIdfMatrix) -> Result<Vec<usize>> {
        if x.dim() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                found: x.dim(),
            });
        }
        x.rows()
            .par_iter()
            .map(|row| self.predict_log_scores(row).map(|s| argmax(&s)))
            .collect()
    }
}

/// Index of the first maximal entry.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vectorizer::SparseVector;
    use proptest::prelude::*;

    const LOC: usize = 0;
    const PER: usize = 1;
    // features: john = 0, paris = 1
    fn one_hot(col: usize) -> SparseVector {
        SparseVector::new(2, vec![(col, 1.0)]).unwrap()
    }

    fn paris_john() -> NbModel {
        let x = TfIdfMatrix::new(2, vec![one_hot(1), one_hot(1), one_hot(0)]).unwrap();
        NbModel::fit(&x, &[LOC, LOC, PER], 1.0, 2).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn fit_hand_worked() {
        let m = paris_john();
        assert!(close(m.log_prior()[LOC].exp(), 2.0 / 3.0));
        assert!(close(m.log_prior()[PER].exp(), 1.0 / 3.0));
        let loc: Vec<f64> = m
            .class_log_likelihood(LOC)
            .iter()
            .map(|v| v.exp())
            .collect();
        let per: Vec<f64> = m
            .class_log_likelihood(PER)
            .iter()
            .map(|v| v.exp())
            .collect();
        assert!(close(loc[0], 0.25) && close(loc[1], 0.75));
        assert!(close(per[0], 2.0 / 3.0) && close(per[1], 1.0 / 3.0));
    }

    #[test]
    fn fit_single_row() {
        let x = TfIdfMatrix::new(2, vec![one_hot(0)]).unwrap();
        let m = NbModel::fit(&x, &[0], 1.0, 1).unwrap();
        assert_eq!(m.log_prior(), &[0.0]);
        let theta: Vec<f64> = m.class_log_likelihood(0).iter().map(|v| v.exp()).collect();
        assert!(close(theta[0], 2.0 / 3.0) && close(theta[1], 1.0 / 3.0));
    }

    #[test]
    fn fit_rejects_bad_input() {
        let x = TfIdfMatrix::new(2, vec![one_hot(0)]).unwrap();
        for alpha in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                NbModel::fit(&x, &[0], alpha, 2),
                Err(Error::InvalidArgument(_))
            ));
        }
        assert!(matches!(NbModel::fit(&x, &[2], 1.0, 2), Err(Error::Fit(_))));
        assert!(matches!(
            NbModel::fit(&x, &[0, 1], 1.0, 2),
            Err(Error::Fit(_))
        ));
        let empty = TfIdfMatrix::new(2, vec![]).unwrap();
        assert!(matches!(
            NbModel::fit(&empty, &[], 1.0, 2),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn empty_class_gets_neg_infinite_prior() {
        let x = TfIdfMatrix::new(2, vec![one_hot(0), one_hot(1)]).unwrap();
        let m = NbModel::fit(&x, &[0, 2], 1.0, 3).unwrap();
        assert_eq!(m.log_prior()[1], f64::NEG_INFINITY);
        assert!(m
            .class_log_likelihood(1)
            .iter()
            .all(|v| close(*v, 0.5f64.ln())));
        let scores = m.predict_log_scores(&one_hot(0)).unwrap();
        assert_eq!(scores[1], f64::NEG_INFINITY);
    }

    #[test]
    fn log_scores_hand_worked() {
        let m = paris_john();
        let scores = m.predict_log_scores(&one_hot(1)).unwrap();
        assert!(close(scores[LOC], 0.5f64.ln()));
        assert!(close(scores[PER], (1.0f64 / 9.0).ln()));

        let zero = m.predict_log_scores(&SparseVector::zeros(2)).unwrap();
        assert_eq!(zero, m.log_prior());

        let scaled = SparseVector::new(2, vec![(1, 2.5)]).unwrap();
        let s1 = m.predict_log_scores(&one_hot(1)).unwrap();
        let sc = m.predict_log_scores(&scaled).unwrap();
        for j in 0..2 {
            let lhs = sc[j] - m.log_prior()[j];
            let rhs = 2.5 * (s1[j] - m.log_prior()[j]);
            assert!((lhs - rhs).abs() < 1e-12);
        }

        assert!(matches!(
            m.predict_log_scores(&SparseVector::zeros(3)),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        ));
    }

    #[test]
    fn predict_examples() {
        let m = paris_john();
        assert_eq!(m.predict(&one_hot(1)).unwrap().label, LOC);
        assert_eq!(m.predict(&SparseVector::zeros(2)).unwrap().label, LOC);

        // identical classes tie; lowest index wins
        let x = TfIdfMatrix::new(2, vec![one_hot(0), one_hot(0)]).unwrap();
        let tie = NbModel::fit(&x, &[0, 1], 1.0, 2).unwrap();
        assert_eq!(tie.log_prior()[0], tie.log_prior()[1]);
        assert_eq!(tie.predict(&one_hot(0)).unwrap().label, 0);
        assert_eq!(tie.predict(&one_hot(1)).unwrap().label, 0);
    }

    #[test]
    fn predict_batch_examples() {
        let m = paris_john();
        let empty = TfIdfMatrix::new(2, vec![]).unwrap();
        assert!(m.predict_batch(&empty).unwrap().is_empty());

        let x = TfIdfMatrix::new(2, vec![one_hot(1), one_hot(1), one_hot(0)]).unwrap();
        let batch = m.predict_batch(&x).unwrap();
        assert_eq!(
            batch.iter().map(|p| p.label).collect::<Vec<_>>(),
            vec![LOC, LOC, PER]
        );
        for (row, p) in x.rows().iter().zip(&batch) {
            assert_eq!(&m.predict(row).unwrap(), p);
        }
        assert_eq!(m.predict_labels(&x).unwrap(), vec![LOC, LOC, PER]);
    }

    #[test]
    fn argmax_prefers_first_maximum() {
        assert_eq!(argmax(&[1.0, 3.0, 3.0]), 1);
        assert_eq!(argmax(&[f64::NEG_INFINITY, f64::NEG_INFINITY]), 0);
        assert_eq!(argmax(&[f64::NEG_INFINITY, -5.0]), 1);
    }

    fn instance() -> impl Strategy<Value = (usize, usize, Vec<(Vec<f64>, usize)>)> {
        (1usize..=10, 1usize..=4).prop_flat_map(|(nf, nc)| {
            let row = (
                proptest::collection::vec(prop_oneof![Just(0.0), 0.0f64..3.0], nf),
                0..nc,
            );
            (Just(nf), Just(nc), proptest::collection::vec(row, 1..=30))
        })
    }

    fn matrix(nf: usize, rows: &[(Vec<f64>, usize)]) -> TfIdfMatrix {
        let rows = rows
            .iter()
            .map(|(dense, _)| {
                SparseVector::new(nf, dense.iter().copied().enumerate().collect()).unwrap()
            })
            .collect();
        TfIdfMatrix::new(nf, rows).unwrap()
    }

    proptest! {
        #[test]
        fn model_distributions_are_normalized((nf, nc, rows) in instance(), alpha in 0.1f64..2.0) {
            let y: Vec<usize> = rows.iter().map(|r| r.1).collect();
            let m = NbModel::fit(&matrix(nf, &rows), &y, alpha, nc).unwrap();
            let prior_sum: f64 = m.log_prior().iter().map(|p| p.exp()).sum();
            prop_assert!((prior_sum - 1.0).abs() <= 1e-12);
            for j in 0..nc {
                let ll = m.class_log_likelihood(j);
                prop_assert!(ll.iter().all(|v| v.is_finite()));
                let s: f64 = ll.iter().map(|v| v.exp()).sum();
                prop_assert!((s - 1.0).abs() <= 1e-9);
            }
        }

        #[test]
        fn fit_is_bit_deterministic((nf, nc, rows) in instance()) {
            let y: Vec<usize> = rows.iter().map(|r| r.1).collect();
            let x = matrix(nf, &rows);
            let a = NbModel::fit(&x, &y, 1.0, nc).unwrap();
            let b = NbModel::fit(&x, &y, 1.0, nc).unwrap();
            let bits = |m: &NbModel| {
                (0..nc).flat_map(|j| m.class_log_likelihood(j).to_vec()).map(f64::to_bits).collect::<Vec<_>>()
            };
            prop_assert_eq!(bits(&a), bits(&b));
        }

        #[test]
        fn argmax_ignores_constant_shift(
            scores in proptest::collection::vec(-50i32..0, 1..8),
            shift in -100i32..100,
        ) {
            // integer-valued scores keep the shift exact in f64
            let base: Vec<f64> = scores.iter().map(|&s| f64::from(s)).collect();
            let shifted: Vec<f64> = scores.iter().map(|&s| f64::from(s + shift)).collect();
            prop_assert_eq!(argmax(&base), argmax(&shifted));
        }
    }
}
