use thiserror::Error;

use crate::poly::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarError {
    #[error("at least one base variable is required")]
    Empty,
    #[error("{base} base variables but {symbols} symbol variables")]
    LengthMismatch { base: usize, symbols: usize },
    #[error("invalid variable name `{0}`")]
    BadName(String),
    #[error("variable `{0}` declared twice")]
    Duplicate(String),
}

/// Failed membership in a principal ideal; carries the division remainder.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not divisible (remainder {remainder:?})")]
pub struct NotDivisible {
    pub remainder: Polynomial,
}
