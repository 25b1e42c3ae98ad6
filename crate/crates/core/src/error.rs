use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaftError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("shift {shift} is not a multiple of the grid step {step}")]
    NotGridAligned { shift: f64, step: f64 },

    #[error("lattice misalignment: {0}")]
    LatticeMisaligned(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, SaftError>;

impl From<std::io::Error> for SaftError {
    fn from(e: std::io::Error) -> Self {
        SaftError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for SaftError {
    fn from(e: serde_json::Error) -> Self {
        SaftError::Format(e.to_string())
    }
}

impl From<csv::Error> for SaftError {
    fn from(e: csv::Error) -> Self {
        SaftError::Format(e.to_string())
    }
}
