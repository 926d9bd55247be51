use thiserror::Error;

/// Failure classes shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("polynomial is not symmetric under A <-> B")]
    NotSymmetric,
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("not in the image of the Satake transform: {0}")]
    NotInImage(String),
    #[error("not a member of the ideal; remainder {0}")]
    NotMember(String),
    #[error("precision level {needed} exceeds cap {cap}")]
    PrecisionOverflow { needed: u32, cap: u32 },
    #[error("enumeration box of size {size} exceeds cap {cap}")]
    BoxOverflow { size: u128, cap: u128 },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
