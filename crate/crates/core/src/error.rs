use thiserror::Error;

/// Errors raised anywhere in the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid simple type {0}")]
    InvalidType(String),

    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("orbit exceeds the configured cap of {cap} points")]
    OrbitCapExceeded { cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },

    #[error("unknown real form `{0}`")]
    UnknownRealForm(String),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("embedding rejected: {0}")]
    Embedding(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported schema `{found}` (expected `{expected}`)")]
    Schema { expected: String, found: String },

    #[error("{0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
