use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree {degree} outside [{lo}, {hi}]")]
    DegreeOutOfRange { degree: i32, lo: i32, hi: i32 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("{side} equations are dependent: combination {combination:?} vanishes")]
    Dependent { side: String, combination: Vec<i64> },
    #[error("pair is not adapted: {0}")]
    NotAdapted(String),
    #[error("characteristic {characteristic} divides the differential scaling {scale}")]
    Characteristic { characteristic: u32, scale: usize },
    #[error("Gröbner degree cap {cap} exceeded (pair of degree {degree})")]
    DegreeCap { cap: u32, degree: u32 },
    #[error("column {column} does not lie in the submodule (normal form {remainder})")]
    NotSubmodule { column: usize, remainder: String },
    #[error("not contained: {0}")]
    NotContained(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
