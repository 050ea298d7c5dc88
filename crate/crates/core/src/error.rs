use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("form ({alpha1}, {alpha2}, {alpha3}) is not positive definite: 4*a1*a3 <= a2^2")]
    NotPositiveDefinite { alpha1: f64, alpha2: f64, alpha3: f64 },

    #[error("quadrant enumeration requires a rectangular form (alpha2 = 0), got alpha2 = {0}")]
    NotRectangular(f64),

    #[error("sample size {requested} exceeds the {available} available values")]
    SampleTooLarge { requested: usize, available: usize },

    #[error("oracle refused N = {n}: nested loops are limited to N <= {limit}")]
    OracleTooLarge { n: usize, limit: usize },

    #[error("gap {gap} at index {index} exceeds the bound {bound}")]
    GapExceedsBound { index: usize, gap: f64, bound: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("identity needs a2 * l * b2 != 0")]
    DegenerateDenominator,

    #[error("exhaustive search refused M = {m}: limit is {limit}")]
    GuardExceeded { m: i64, limit: i64 },

    #[error("integer overflow: entries must satisfy |v| <= 2^30")]
    Overflow,

    #[error("rectangle touches the singular boundary 4*a1*a3 = a2^2")]
    SingularDomain,

    #[error("no sign change of the gap-constant equation on [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
