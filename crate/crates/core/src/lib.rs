//! Named entity recognition and classification with a multinomial naive
//! Bayes classifier over tf-idf token features.
//!
//! The pipeline is:
//!
//! 1. [`corpus`] parses `word/TAG` text into labelled tokens and partitions it.
//! 2. [`vectorizer`] fits a vocabulary and smoothed idf weights on the training
//!    tokens and maps any token to an L2-normalized sparse row.
//! 3. [`classifier`] fits class priors and smoothed feature likelihoods and
//!    decodes each row by log-space argmax.
//! 4. [`evaluation`] scores predictions per class and runs k-fold
//!    cross-validation.
//!
//! ```
//! use nerc_core::{parse_tagged_text, NercModel, TagSet};
//!
//! let tagset = TagSet::default();
//! let corpus = parse_tagged_text("ಅಮೆರಿಕ/NEL ಬಳಿಕ/NONE ಇಲ್ಲಿ/NONE", &tagset).unwrap();
//! let model = NercModel::train(&corpus, &tagset, 1.0).unwrap();
//! assert_eq!(model.predict_tags(&["ಅಮೆರಿಕ"]).unwrap(), vec!["NEL"]);
//! ```

pub mod classifier;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod pipeline;
pub mod vectorizer;

pub use classifier::{NbModel, Prediction, DEFAULT_ALPHA};
pub use corpus::{
    emit_tagged_text, fold_ranges, k_folds, parse_tagged_text, split_dev_test, tokenize_lines,
    Corpus, Fold, Label, TagEntry, TagSet, TaggedToken,
};
pub use error::{Error, ParseReason, Result};
pub use evaluation::{
    cross_validate, render_cross_validation, render_cross_validation_tsv, render_report,
    render_report_tsv, ClassCount, ClassCounts, ClassMetrics, ClassificationReport,
    CrossValidation, FoldResult,
};
pub use pipeline::NercModel;
pub use vectorizer::{
    compute_idf, l2_normalize, term_frequency, FittedVectorizer, SparseVector, TfIdfMatrix,
    Vocabulary,
};
