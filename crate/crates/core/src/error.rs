use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("truncated archive after {records} complete records")]
    TruncatedArchive { records: usize },

    #[error("invalid document on line {line}: {reason}")]
    InvalidDocument { line: usize, reason: String },

    #[error("insufficient training data for language `{language}`: {chars} chars, need {needed}")]
    InsufficientData {
        language: String,
        chars: usize,
        needed: usize,
    },

    #[error("invalid template for `{predicate}`: {reason}")]
    InvalidTemplate { predicate: String, reason: String },

    #[error("bucket edges must be strictly increasing")]
    NonMonotoneEdges,

    #[error("unknown quality dimension `{0}`")]
    UnknownDimension(String),

    #[error("document `{doc_id}` belongs to collection `{found}`, expected `{expected}`")]
    OutOfScope {
        doc_id: String,
        expected: String,
        found: String,
    },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("conflict: {0}")]
    Conflict(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
