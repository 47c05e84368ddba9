//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable tables are incompatible: {0}")]
    TableMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("determinant is not a unit of the Laurent ring: {0}")]
    NotAUnit(String),
    #[error("invalid coweight: {0}")]
    InvalidCoweight(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("twisted factor base vanishes identically")]
    ZeroFactorBase,
    #[error("jet {0} exceeds the declared order cap")]
    JetCapExceeded(String),
    #[error("relation {0} contains no jet of the unknown")]
    PureFunctionRelation(usize),
    #[error("relations {0:?} are inconsistent")]
    InconsistentRelations(Vec<usize>),
    #[error("substitution records differ between the function and the relations")]
    RecordMismatch,
    #[error("the level is critical (k = -2)")]
    CriticalLevel,
    #[error("truncated mode sum was not certified: {0}")]
    TruncationNotCertified(String),
    #[error("coweight is not minuscule: {0}")]
    NotMinuscule(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
