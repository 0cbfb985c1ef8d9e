//! Error type shared across the crate.

use thiserror::Error;

use crate::game::Side;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty set: {what} must have at least one element")]
    EmptySet { what: &'static str },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("not a projection ({context}): defect {defect:.3e}")]
    NotAProjection { context: String, defect: f64 },

    #[error("invalid PVM ({context}): defect {defect:.3e}")]
    InvalidPvm { context: String, defect: f64 },

    #[error("state vector is not normalized: norm {norm}")]
    InvalidState { norm: f64 },

    #[error("invalid strategy: {context}")]
    InvalidStrategy { context: String },

    #[error(
        "operators do not commute at (x={x}, a={a}, y={y}, b={b}): \
         Frobenius defect {defect:.3e}"
    )]
    NotCommuting {
        x: usize,
        a: usize,
        y: usize,
        b: usize,
        defect: f64,
    },

    #[error("density does not commute with Bob image (y={y}, b={b}): defect {defect:.3e}")]
    DensityNotCommuting { y: usize, b: usize, defect: f64 },

    #[error(
        "not an imitation game: {side:?} question {question} cannot separate \
         answers {first} and {second}"
    )]
    NotImitation {
        side: Side,
        question: usize,
        first: usize,
        second: usize,
    },

    #[error("strategy is not perfect: epsilon violation {eps:.3e} exceeds {tol:.3e}")]
    NotPerfect { eps: f64, tol: f64 },

    #[error("word of length {len} exceeds the cap {cap}")]
    WordTooLong { len: usize, cap: usize },

    #[error("index out of range: {context}")]
    RangeError { context: String },

    #[error("search space of {size} strategies exceeds the cap {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },

    #[error("numerical instability: {context}")]
    NumericalInstability { context: String },

    #[error("strategy family is empty")]
    EmptyFamily,

    #[error(
        "realized correlation differs from the trace correlation by {distance:.3e} (> {tol:.3e})"
    )]
    RealizationMismatch { distance: f64, tol: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("input error in {path}: {message}")]
    Input { path: String, message: String },
}

impl Error {
    pub fn dim(context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
        }
    }
}
