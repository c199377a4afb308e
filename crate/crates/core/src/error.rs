use thiserror::Error;

/// Errors raised by fan construction and the cohomology routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ray index {index} out of range (fan has {count} rays)")]
    RayIndex { index: usize, count: usize },

    #[error("ray {index} is not primitive")]
    NonPrimitiveRay { index: usize },

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("unsupported fan: {0}")]
    UnsupportedFan(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
