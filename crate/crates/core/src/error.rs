use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("ambient dimension {0} exceeds the cap of {max}", max = crate::MAX_DIMENSION)]
    DimensionTooLarge(usize),
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("vector has length {found}, expected {expected}")]
    VectorLength { expected: usize, found: usize },
    #[error("duplicate key in quantum set entries")]
    DuplicateKey,
    #[error("commutator of {0} projections exceeds the cap of {max}", max = crate::commutator::MAX_FINITE_COMMUTATOR)]
    CommutatorCap(usize),
    #[error("generator caps exceeded: {0}")]
    GeneratorCaps(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("formula is not Δ0: unbounded quantifier over `{0}`")]
    NotDelta0(String),
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
