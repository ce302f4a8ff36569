use thiserror::Error;

/// Errors raised by construction and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {context}: left is {left}, right is {right}")]
    DimensionMismatch {
        context: &'static str,
        left: String,
        right: String,
    },

    #[error("coordinate ({row}, {col}) out of range for a {n_rows}x{n_cols} matrix")]
    CoordOutOfRange {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("tensor coordinate {coord:?} invalid for dims {dims:?}")]
    TensorCoordInvalid { coord: Vec<usize>, dims: Vec<usize> },

    #[error("mode error: {0}")]
    ModeError(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("model validation failed [{code}]: {message}")]
    Validation { code: &'static str, message: String },

    #[error("projector mismatch: {0}")]
    ProjectorMismatch(String),

    #[error("partition error: {0}")]
    PartitionError(String),

    #[error("iteration failed to converge within {max_iter} iterations (residual {residual})")]
    Convergence { max_iter: usize, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
