use thiserror::Error;

/// Failures of the series and polynomial layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands are defined over different variable tables")]
    VarTableMismatch,
    #[error("constant coefficient must be 1")]
    NonUnitConstant,
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstant,
    #[error("series must have the form x + O(x^2) to be reverted")]
    NotStrictIsomorphism,
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` must have positive weight")]
    ZeroWeight(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("exponent vector has length {found}, expected {expected}")]
    ExponentLength { expected: usize, found: usize },
    #[error("bivariate series is not divisible by x - y")]
    NotDivisibleByDiagonal,
    #[error("triangular solve has a zero pivot at weight {0}")]
    SingularTriangularStep(usize),
    #[error("ring map has {found} images but the source table has {expected} variables")]
    RingMapArity { expected: usize, found: usize },
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

/// Failures of the lattice computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("weight {n} exceeds the configured ceiling {ceiling}")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("weight {n} needs a b-model of weight at least {n}, got {model}")]
    ModelTooSmall { n: usize, model: usize },
    #[error("element is not an integral polynomial of weight {0}")]
    NotInAmbient(usize),
}
