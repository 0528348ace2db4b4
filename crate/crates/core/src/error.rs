use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("coroot of isotropic root {0} is undefined")]
    IsotropicCoroot(String),

    #[error("structure-constant closure failed: {0}")]
    ClosureFailure(String),

    #[error("parity violation: {0}")]
    ParityViolation(String),

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("wrong PBW order: {0}")]
    WrongOrder(String),

    #[error("inhomogeneous vector: {0}")]
    Inhomogeneous(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
