use thiserror::Error;

/// Errors shared across the kernel.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular matrix")]
    Singular,
    #[error("rank error: {0}")]
    Rank(String),
    #[error("no exact radical: {0}")]
    Radical(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("spec error: {0}")]
    Spec(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, KernelError>;
