use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation requires a field, got {0}")]
    NonFieldRing(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("exactness failure at position {position}: {detail}")]
    ExactnessFailure { position: usize, detail: String },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("enumeration too large: {what} has {size} elements, limit {limit}")]
    TooLarge { what: String, size: String, limit: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
