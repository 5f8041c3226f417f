use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {0} lies outside the open unit disk")]
    OutsideDisk(Complex64),

    #[error("map is not sense-preserving at {witness} (jacobian {jacobian:e})")]
    SenseReversing { witness: Complex64, jacobian: f64 },

    #[error("h' vanishes at {0}")]
    CriticalPoint(Complex64),

    #[error("|g'(0)| = {0} >= 1, affine normalization is degenerate")]
    DegenerateNormalization(f64),

    #[error("normalization violated for map `{label}`: {detail}")]
    Normalization { label: String, detail: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("zero derivative norm at {0}")]
    ZeroNorm(Complex64),

    #[error("malformed map descriptor: {0}")]
    Descriptor(String),

    #[error("unknown map label `{0}`")]
    UnknownLabel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
