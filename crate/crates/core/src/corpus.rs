//! Tagged corpora in `surface/MNEMONIC` form, the named-entity tag set, and
//! deterministic dev/test and k-fold partitions.
//!
//! A corpus file is plain UTF-8: tokens separated by any Unicode whitespace,
//! each token written as `surface/TAG`, e.g.
//!
//! ```text
//! ಅಮೆರಿಕ/NEL ಬಳಿಕ/NONE
//! ನರೇಂದ್ರ/NEPB ಮೋದಿಯೊಂದಿಗೆ/NEPE
//! ```
//!
//! Tokens are split at the last `/`, so surfaces may themselves contain `/`.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, ParseReason, Result};

/// Integer class id of a tag. Only obtainable through a [`TagSet`], so it is
/// always in range for the tag set that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(usize);

impl Label {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One row of the tag table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TagEntry {
    /// Entity group the tag belongs to ("Person", "Location", ...).
    pub category: String,
    pub mnemonic: String,
    pub label: usize,
    pub description: String,
}

impl TagEntry {
    fn new(category: &str, mnemonic: &str, label: usize, description: &str) -> Self {
        TagEntry {
            category: category.to_string(),
            mnemonic: mnemonic.to_string(),
            label,
            description: description.to_string(),
        }
    }
}

/// Bijection between tag mnemonics and the integer labels `0..n`.
///
/// Entries keep their table (display) order, which groups the multi-word
/// B/I/E variants under their entity type; label order is a separate view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagSet {
    entries: Vec<TagEntry>,
    // label -> position in `entries`
    by_label: Vec<usize>,
    by_mnemonic: HashMap<String, usize>,
}

impl TagSet {
    pub fn new(entries: Vec<TagEntry>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidTagSet("no entries".into()));
        }
        let mut by_label = vec![usize::MAX; n];
        let mut by_mnemonic = HashMap::with_capacity(n);
        for (pos, entry) in entries.iter().enumerate() {
            let m = &entry.mnemonic;
            if m.is_empty() || m.contains('/') || m.chars().any(char::is_whitespace) {
                return Err(Error::InvalidTagSet(format!("malformed mnemonic {m:?}")));
            }
            if entry.label >= n {
                return Err(Error::InvalidTagSet(format!(
                    "label {} of {m:?} is outside 0..{n}",
                    entry.label
                )));
            }
            if by_label[entry.label] != usize::MAX {
                return Err(Error::InvalidTagSet(format!(
                    "duplicate label {}",
                    entry.label
                )));
            }
            by_label[entry.label] = pos;
            if by_mnemonic.insert(m.clone(), pos).is_some() {
                return Err(Error::InvalidTagSet(format!("duplicate mnemonic {m:?}")));
            }
        }
        Ok(TagSet {
            entries,
            by_label,
            by_mnemonic,
        })
    }

    /// The 23-tag Kannada named-entity tag set: 22 entity tags plus `NONE`.
    pub fn kannada() -> Self {
        let rows = [
            ("Person", "NEP", 0, "Name of a person one word"),
            ("Person", "NEPB", 13, "Beginning name"),
            ("Person", "NEPI", 14, "Intermediate name"),
            ("Person", "NEPE", 15, "End name"),
            ("Location", "NEL", 1, "Name of a place, location one word"),
            ("Location", "NELB", 16, "Beginning name Loc"),
            ("Location", "NELI", 17, "Intermediate name Loc"),
            ("Location", "NELE", 18, "End name Loc"),
            ("Organization", "NEO", 2, "Name of an organization one word"),
            ("Organization", "NEOB", 19, "Beginning name Org"),
            ("Organization", "NEOI", 20, "Intermediate name Org"),
            ("Organization", "NEOE", 21, "End name Org"),
            ("Designation", "NED", 3, "Name of any designation"),
            ("Term", "NETE", 4, "Name of terms, diseases"),
            ("Title-Person", "NETP", 5, "Title before the name"),
            ("Title-Object", "NETO", 6, "Name of Object"),
            ("Brand", "NEB", 7, "Brands Name"),
            ("Measure", "NEM", 8, "Any measure"),
            ("Number", "NEN", 9, "Numeric value"),
            ("Time", "NETI", 10, "date, month, year etc"),
            ("Abbreviation", "NEA", 11, "Name in short form"),
            ("Noun entity", "NE", 12, "Other than names (nouns)"),
            ("Not a NE", "NONE", 22, "Not a named entity"),
        ];
        let entries = rows
            .iter()
            .map(|&(c, m, l, d)| TagEntry::new(c, m, l, d))
            .collect();
        TagSet::new(entries).expect("built-in tag set is a bijection")
    }

    /// Number of labels (and mnemonics).
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in table order.
    pub fn entries(&self) -> &[TagEntry] {
        &self.entries
    }

    pub fn tag_to_label(&self, mnemonic: &str) -> Result<Label> {
        self.by_mnemonic
            .get(mnemonic)
            .map(|&pos| Label(self.entries[pos].label))
            .ok_or_else(|| Error::UnknownTag(mnemonic.to_string()))
    }

    pub fn label_to_tag(&self, label: usize) -> Result<&str> {
        self.by_label
            .get(label)
            .map(|&pos| self.entries[pos].mnemonic.as_str())
            .ok_or(Error::LabelOutOfRange {
                label,
                n_labels: self.len(),
            })
    }

    /// Checked conversion from a raw class index.
    pub fn label(&self, index: usize) -> Result<Label> {
        if index < self.len() {
            Ok(Label(index))
        } else {
            Err(Error::LabelOutOfRange {
                label: index,
                n_labels: self.len(),
            })
        }
    }
}

impl Default for TagSet {
    fn default() -> Self {
        TagSet::kannada()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedToken {
    surface: String,
    label: Label,
}

impl TaggedToken {
    /// NFC-normalizes `surface`; rejects empty surfaces and surfaces with whitespace.
    pub fn new(surface: &str, label: Label) -> Result<Self> {
        let surface: String = surface.nfc().collect();
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!(
                "token surface {surface:?} is empty or contains whitespace"
            )));
        }
        Ok(TaggedToken { surface, label })
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn label(&self) -> Label {
        self.label
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    tokens: Vec<TaggedToken>,
}

impl Corpus {
    pub fn new(tokens: Vec<TaggedToken>) -> Self {
        Corpus { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[TaggedToken] {
        &self.tokens
    }

    pub fn words(&self) -> Vec<&str> {
        self.tokens.iter().map(TaggedToken::surface).collect()
    }

    /// Raw class indices, in corpus order.
    pub fn labels(&self) -> Vec<usize> {
        self.tokens.iter().map(|t| t.label.index()).collect()
    }

    fn slice(&self, range: Range<usize>) -> Corpus {
        Corpus::new(self.tokens[range].to_vec())
    }
}

impl FromIterator<TaggedToken> for Corpus {
    fn from_iter<I: IntoIterator<Item = TaggedToken>>(iter: I) -> Self {
        Corpus::new(iter.into_iter().collect())
    }
}

/// Parses whitespace-separated `surface/TAG` tokens.
///
/// Errors carry the zero-based token index and the one-based line number.
pub fn parse_tagged_text(text: &str, tagset: &TagSet) -> Result<Corpus> {
    let mut tokens = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        for raw in line.split_whitespace() {
            let fail = |reason| Error::Parse {
                index: tokens.len(),
                line: line_no + 1,
                token: raw.to_string(),
                reason,
            };
            let (surface, mnemonic) = raw
                .rsplit_once('/')
                .ok_or_else(|| fail(ParseReason::MissingSlash))?;
            if surface.is_empty() {
                return Err(fail(ParseReason::EmptySurface));
            }
            let label = tagset
                .tag_to_label(mnemonic)
                .map_err(|_| fail(ParseReason::UnknownTag(mnemonic.to_string())))?;
            tokens.push(TaggedToken {
                surface: surface.nfc().collect(),
                label,
            });
        }
    }
    Ok(Corpus::new(tokens))
}

/// Splits untagged text into lines of NFC-normalized whitespace-separated
/// tokens. Punctuation stays attached to its token.
pub fn tokenize_lines(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|line| line.split_whitespace().map(|t| t.nfc().collect()).collect())
        .collect()
}

/// Writes the corpus back out as single-space separated `surface/TAG` tokens.
pub fn emit_tagged_text(corpus: &Corpus, tagset: &TagSet) -> Result<String> {
    let mut out = String::new();
    for (i, token) in corpus.tokens.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&token.surface);
        out.push('/');
        out.push_str(tagset.label_to_tag(token.label.index())?);
    }
    Ok(out)
}

/// Contiguous split: the last `floor(n * test_fraction)` tokens form the test
/// set, the rest the development set.
pub fn split_dev_test(corpus: &Corpus, test_fraction: f64) -> Result<(Corpus, Corpus)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "test fraction {test_fraction} is outside (0, 1)"
        )));
    }
    if corpus.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot split an empty corpus".into(),
        ));
    }
    let n = corpus.len();
    let n_test = floor_product(n, test_fraction);
    let cut = n - n_test;
    Ok((corpus.slice(0..cut), corpus.slice(cut..n)))
}

// floor(n * f), snapping products that land within rounding error of an
// integer (e.g. n * (5000 / n)) onto that integer.
fn floor_product(n: usize, f: f64) -> usize {
    let exact = n as f64 * f;
    let nearest = exact.round();
    let count = if (exact - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest
    } else {
        exact.floor()
    };
    (count as usize).min(n)
}

/// Position ranges of `k` contiguous folds over `n` items. The first `n % k`
/// folds hold one extra item.
pub fn fold_ranges(n: usize, k: usize) -> Result<Vec<Range<usize>>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 folds, got {k}"
        )));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!(
            "{k} folds requested but only {n} tokens available"
        )));
    }
    let base = n / k;
    let extra = n % k;
    let mut start = 0;
    Ok((0..k)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let range = start..start + len;
            start += len;
            range
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Corpus,
    pub devtest: Corpus,
}

/// Fold `i` uses partition `i` as dev-test and the remaining partitions,
/// in original order, as training data.
pub fn k_folds(dev: &Corpus, k: usize) -> Result<Vec<Fold>> {
    let ranges = fold_ranges(dev.len(), k)?;
    Ok(ranges
        .into_iter()
        .map(|r| {
            let mut train = Vec::with_capacity(dev.len() - r.len());
            train.extend_from_slice(&dev.tokens[..r.start]);
            train.extend_from_slice(&dev.tokens[r.end..]);
            Fold {
                train: Corpus::new(train),
                devtest: dev.slice(r),
            }
        })
        .collect())
}
