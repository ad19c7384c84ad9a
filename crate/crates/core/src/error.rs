use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("radicand {0} is the square of a rational number")]
    RationalSquare(String),

    #[error("radicand {0} is not positive")]
    NonPositiveRadicand(String),

    #[error("operands live in different fields: sqrt({0}) vs sqrt({1})")]
    MixedRadicand(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("index {needed} exceeds materialized depth {depth}")]
    DepthExceeded { needed: usize, depth: usize },

    #[error("singular 2x2 system for d = {d}, residue {residue}")]
    SingularSystem { d: String, residue: usize },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("{0} is outside the interval [a0 - sqrt(d), a0 + 1 - sqrt(d))")]
    OutOfInterval(String),

    #[error("invalid digit string: constraint violated at index {index}")]
    InvalidDigits { index: usize },

    #[error("digit {value} exceeds the largest partial quotient {s_max}")]
    DigitTooLarge { value: u64, s_max: u64 },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("value does not fit: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
