use thiserror::Error;

/// Errors raised by field, polynomial and group operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{what} of size {size} exceeds the configured cap {cap}")]
    SizeCapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("{0} is not irreducible over its coefficient field")]
    NotIrreducible(String),
    #[error("towers with more than two extension levels are not supported")]
    TowerTooDeep,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    CtxMismatch,
    #[error("constant polynomial given where degree >= 1 is required")]
    ConstantInput,
    #[error("operation is undefined for the identity transformation")]
    IdentityInput,
    #[error("the trivial group has no nonconstant invariant")]
    TrivialGroup,
    #[error("point is a pole of an orbit polynomial coefficient")]
    PoleAtAlpha,
    #[error("element is not in the group")]
    NotInGroup,
    #[error("expected an element of order {expected}, found order {found}")]
    WrongOrder { expected: u64, found: u64 },
    #[error("singular matrix")]
    Singular,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn violation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvariantViolation(msg.into()))
}
