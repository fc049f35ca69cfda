use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("division by zero divisor")]
    DivisionByZeroDivisor,
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("element is not in the torsion-free subgroup B: {0}")]
    NotInSubgroupB(String),
    #[error("unit group has no free part")]
    NoFreePart,
    #[error("unsupported codomain: {0}")]
    UnsupportedCodomain(String),
    #[error("domain or codomain mismatch")]
    DomainMismatch,
    #[error("homomorphism is not bijective")]
    NotBijective,
    #[error("index out of range: {0}")]
    IndexError(String),
    #[error("elements belong to different groups")]
    SpecMismatch,
    #[error("cocycle {0} has no coboundary witness")]
    MissingWitness(usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("element is not diagonal")]
    NotDiagonal,
    #[error("quantifier budget of {0} atoms exceeded")]
    BudgetExceeded(u64),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unregistered definable set `{0}`")]
    UnregisteredDefinableSet(String),
    #[error("formula would have {0} conjuncts")]
    CombinatorialBlowup(u64),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}
