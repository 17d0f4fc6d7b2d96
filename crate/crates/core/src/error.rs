use thiserror::Error;

/// Errors reported by every layer of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("operands belong to different rings")]
    RingMismatch,

    #[error("operands belong to different skew polynomial rings")]
    ContextMismatch,

    #[error("{0} is not a unit")]
    NotAUnit(String),

    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    EnumerationCap { size: u64, cap: u64 },

    #[error("the zero polynomial has no quasi-degree")]
    ZeroPolynomial,

    #[error("divisor must be monic")]
    NonMonicDivisor,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial has negative exponents: {0}")]
    NotOrdinary(String),

    #[error("invalid quotient context: {0}")]
    InvalidContext(String),

    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("{generator} does not right-divide the modulus (remainder {remainder})")]
    NotAGenerator { generator: String, remainder: String },

    #[error("{generator} is not of minimal degree in its left ideal (ideal dimension {ideal_dim}, expected {expected_dim}; minimal generator {minimal})")]
    NotMinimalGenerator {
        generator: String,
        ideal_dim: usize,
        expected_dim: usize,
        minimal: String,
    },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
