use thiserror::Error;

use crate::scalars::Symbol;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot combine values in Q(sqrt({left})) and Q(sqrt({right}))")]
    IncompatibleExtensions { left: u32, right: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("square root of negative rational {0}")]
    NegativeRadicand(String),

    #[error("radicand {0} is too large to factor")]
    RadicandTooLarge(String),

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{0}` is not bound")]
    Unbound(Symbol),

    #[error("exponent overflow in symbol `{0}`")]
    ExponentOverflow(Symbol),

    #[error("odd power of `{0}` where only even powers are allowed")]
    OddPower(Symbol),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("rewriting exceeded the iteration budget of {0} steps")]
    RewriteBudget(usize),

    #[error("expected a form of degree {expected}, found degree {found}")]
    DegreeMismatch { expected: u32, found: u32 },

    #[error("bundle degree k is nonzero but the presentation has no generator `alpha`")]
    MissingAlpha,

    #[error("parameter u = t^2 must be positive, got {0}")]
    NonPositiveParameter(String),

    #[error("matrix Q is not symmetric positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("unsupported equation shape: {0}")]
    Unsupported(String),

    #[error("inconsistent system: {0}")]
    Inconsistent(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
