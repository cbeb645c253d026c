use thiserror::Error;

/// Errors raised by the exterior algebra, the oscillator model and the
/// multiplier machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, got n = {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("invalid model configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("field does not conform to the model: {0}")]
    Shape(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("sampling error: {0}")]
    Sampling(String),
}

pub type Result<T> = std::result::Result<T, Error>;
