use thiserror::Error;

/// Errors raised by the arithmetic, expansion and checking layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime, got {0}")]
    InvalidPrime(u64),

    #[error("operands carry different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("digit window [{lo}, {hi}] is empty")]
    EmptyWindow { lo: i64, hi: i64 },

    #[error("value has valuation {valuation} below the digit window start {lo}")]
    DigitsBelowWindow { valuation: i64, lo: i64 },

    #[error("{0} is not an element of Y = Z[1/p] ∩ (-p/2, p/2)")]
    NotInAlphabet(String),

    #[error("seed is not a root of the polynomial modulo p")]
    NotARoot,

    #[error("seed is not a simple root: derivative vanishes modulo p")]
    NonSimpleRoot,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("index {index} out of range (available {available})")]
    IndexOutOfRange { index: i64, available: usize },

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("complete quotients were not retained for this trace")]
    QuotientsDropped,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
