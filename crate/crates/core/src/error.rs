use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u8, u8),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Raised when a computation contradicts an identity that must hold.
    /// Seeing this means a bug in this crate, not bad input.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
