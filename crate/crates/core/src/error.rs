use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a unit modulo {1}")]
    NonUnitGenerator(u64, u64),
    #[error("generator coordinate out of range: {0}")]
    GeneratorOutOfRange(String),
    #[error("not a tower: {0}")]
    NotATower(String),
    #[error("enumeration bound exceeded: group of order {order} > bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("valuation of zero requested")]
    ZeroElement,
    #[error("element vanishes to working precision {0}")]
    PrecisionExceeded(u32),
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("unsupported conductor shape: {0}")]
    UnsupportedConductor(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
