use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("({c}, {d}) is not primitive: gcd = {gcd}")]
    NotCoprime { c: i64, d: i64, gcd: i64 },

    #[error("invalid lattice shape: {0}")]
    InvalidLattice(String),

    #[error("coordinate {value} exceeds the integer guard {limit}")]
    OverflowGuard { value: i128, limit: i64 },

    #[error("geometry check `{check}` failed: {lhs} > {rhs}")]
    GeometryViolation {
        check: &'static str,
        lhs: f64,
        rhs: f64,
        c: i64,
        d: i64,
    },

    #[error("non-finite value in sample at index {index}")]
    NonFinite { index: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("frequency m = 0 is not a Weyl sum; use the sample count")]
    ZeroFrequency,

    #[error("series diverges: Re(s) = {sigma} must exceed 1")]
    ConvergenceDomain { sigma: f64 },

    #[error("finite-difference step too large: estimated stencil error {estimate} exceeds {tolerance}")]
    StepTooLarge { estimate: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
