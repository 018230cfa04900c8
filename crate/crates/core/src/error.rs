use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid move {0}")]
    InvalidMove(String),

    #[error("truncated file: expected {expected} tokens, found {found} (input ends at token {found})")]
    Truncated { expected: usize, found: usize },

    #[error("trailing data: expected {expected} tokens, found more starting at token {position}")]
    TrailingData { expected: usize, position: usize },

    #[error("parse error at token {position}: {token:?} is not a non-negative integer")]
    Parse { position: usize, token: String },

    #[error("instance too large for exhaustive enumeration: n = {n}, limit is {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("empty trace: {0}")]
    EmptyTrace(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), message: err.to_string() }
    }
}
