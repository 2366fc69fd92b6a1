use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant of a real quadratic field")]
    NotFundamental(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("ideals belong to different fields (discriminants {0} and {1})")]
    FieldMismatch(i64, i64),

    #[error("resource cap exceeded: {what} would need {needed}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        needed: u64,
        cap: u64,
    },

    #[error("character index {index} out of range for a group of order {order}")]
    CharacterIndex { index: usize, order: usize },

    #[error("invalid infinity type: {0}")]
    InfinityType(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point outside the evaluable region: need n_max >= {needed} for y = {y}, have {have}")]
    NotEvaluable { y: f64, needed: u64, have: u64 },

    #[error("character is norm-induced; its theta series is not a cusp form and L(s, psi(psi-bar o sigma)) has a pole at s = 1")]
    NormInduced,

    #[error("internal arithmetic invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
