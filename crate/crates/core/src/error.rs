use thiserror::Error;

use crate::syntax::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable index {index} out of range for {vars} variable(s)")]
    IndexOutOfRange { index: usize, vars: usize },

    #[error("evaluation at a pole: denominator vanishes at the given point")]
    EvaluationAtPole,

    #[error("operation undefined on the zero operator")]
    ZeroOperator,

    #[error("operator of degree {degree} does not fit in order {order}")]
    DegreeExceeded { degree: u32, order: u32 },

    #[error("truncation order {order} is below operator degree {degree}")]
    TruncationUnderflow { degree: u32, order: u32 },

    #[error("order s = {s} is below the basis degree s0 = {s0}")]
    SBelowS0 { s: u32, s0: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
