use thiserror::Error;

use crate::tensor::TensorShape;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: shape mismatch between {left} and {right}")]
    ShapeMismatch {
        op: &'static str,
        left: TensorShape,
        right: TensorShape,
    },

    #[error("invalid tensor shape: {0}")]
    InvalidShape(String),

    #[error("index {index} out of range for ambient dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("{op}: expected {expected}, got {got}")]
    ArgumentMismatch {
        op: &'static str,
        expected: String,
        got: String,
    },

    #[error("{op}: rank {rank} is not admissible ({requirement})")]
    Rank {
        op: &'static str,
        rank: usize,
        requirement: &'static str,
    },

    #[error("point {point:?} lies outside the tube (sum |d_i| = {sum:.3e} >= {halfwidth:.3e})")]
    OutsideTube {
        point: Vec<f64>,
        sum: f64,
        halfwidth: f64,
    },

    #[error("gradient of level function {index} is degenerate (norm {norm:.3e})")]
    DegenerateGradient { index: usize, norm: f64 },

    #[error("gradient of level function {index} is linearly dependent on the previous ones (residual {residual:.3e})")]
    DependentGradients { index: usize, residual: f64 },

    #[error("{op} requires a two-dimensional submanifold, got dimension {dim}")]
    WrongCodimension { op: &'static str, dim: usize },

    #[error("finite-difference nesting depth {depth} exceeds the budget of {max}")]
    NestingExceeded { depth: usize, max: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
