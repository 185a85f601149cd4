use thiserror::Error;

/// Everything that can go wrong in the library. Each variant maps onto one
/// CLI exit class via [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("grid too coarse: {0}")]
    Grid(String),
    #[error("branch cut: {0}")]
    Branch(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("outside validity window: {0}")]
    Window(String),
    #[error("quadrature error estimate too large: {0}")]
    Quadrature(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("exponent overflow: {0}")]
    Overflow(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// 1 for validation-type failures, 2 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence(_) | Error::Quadrature(_) | Error::Overflow(_) => 2,
            _ => 1,
        }
    }
}
