use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("twist exponents differ ({0} vs {1})")]
    MismatchedTwist(u32, u32),

    #[error("field too large for brute force: {needed} candidates exceed the cap of {cap}")]
    CapExceeded { needed: u128, cap: u64 },

    #[error("valuation undetermined at this precision")]
    UndeterminedValuation,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("coefficients are ramified; an unramified polynomial is required")]
    Ramified,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input is not irreducible")]
    NotIrreducible,

    #[error("iteration cap of {0} exceeded")]
    IterationCap(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
