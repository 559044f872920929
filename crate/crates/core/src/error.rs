use thiserror::Error;

/// Errors produced by the chowd library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A dimension, degree, or search size exceeds what an operation supports.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Two objects that must share a shape (n, d, length) do not.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Subset or basis index outside the valid range.
    #[error("index out of range: {0}")]
    Index(String),

    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Input is degenerate for the requested quantity (e.g. zero total influence).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Malformed file or text input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The reconstruction loop ran out of budget before the stopping rule fired.
    #[error("no convergence after {} iterations (last residual {last_residual:.6}): {reason}", trace.len().saturating_sub(1))]
    NonConvergence {
        reason: String,
        last_residual: f64,
        trace: Vec<f64>,
    },

    /// A learner asked an example oracle for something the access model forbids.
    #[error("protocol violation: {0}")]
    Protocol(String),

    /// Too few samples remain for a meaningful estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
