use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: expected {expected} components, got {got}")]
    ShapeMismatch { expected: &'static str, got: usize },

    #[error("precondition violation: {0}")]
    PreconditionViolation(String),

    #[error("grids differ: {0} vs {1}")]
    GridMismatch(usize, usize),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("corrupt snapshot: {0}")]
    BadSnapshot(String),
}
