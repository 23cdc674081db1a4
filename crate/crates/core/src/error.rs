use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("space tags do not match in {context}: {left} vs {right}")]
    SpaceMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("direction {index} needs coordinate {needed} but the codomain truncation has {rows} rows")]
    SupportOverflow {
        index: usize,
        needed: usize,
        rows: usize,
    },

    #[error("direction index {index} is outside the enumeration (1..={len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("direction {index} has no antipodal partner in the enumeration")]
    MissingAntipode { index: usize },

    #[error("gamma = {gamma} lies outside the admissible interval ({low}, {high})")]
    GammaOutOfRange { gamma: f64, low: f64, high: f64 },

    #[error("zero vector rejected in {0}")]
    ZeroVector(&'static str),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("operator {label}: {reason}")]
    Precondition { label: String, reason: String },

    #[error("malformed record: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Format(err.to_string())
    }
}
