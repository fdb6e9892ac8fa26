use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A corpus token could not be split into `surface/MNEMONIC`.
    #[error("token {index} (line {line}) {token:?}: {reason}")]
    Parse {
        index: usize,
        line: usize,
        token: String,
        reason: ParseReason,
    },

    #[error("unknown tag mnemonic {0:?}")]
    UnknownTag(String),

    #[error("label {label} is outside the tag set (0..{n_labels})")]
    LabelOutOfRange { label: usize, n_labels: usize },

    #[error("invalid tag set: {0}")]
    InvalidTagSet(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("dimension mismatch: model expects {expected} features, vector has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseReason {
    MissingSlash,
    EmptySurface,
    UnknownTag(String),
}

impl std::fmt::Display for ParseReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseReason::MissingSlash => write!(f, "missing \"/TAG\" suffix"),
            ParseReason::EmptySurface => write!(f, "empty surface before \"/\""),
            ParseReason::UnknownTag(tag) => write!(f, "unknown tag mnemonic {tag:?}"),
        }
    }
}
