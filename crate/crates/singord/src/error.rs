use thiserror::Error;

/// Every failure the library can report.
///
/// The CLI maps these onto exit codes, so the variants are grouped by
/// cause: bad input, resource ceilings, randomness and verification.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("zero input")]
    ZeroInput,
    #[error("series has odd order {0}")]
    OddOrder(usize),
    #[error("a second independent square root would be required: {0}")]
    ExtensionDepth(String),
    #[error("colength not certified up to jet order {0}")]
    NonFiniteColength(usize),
    #[error("germ is not reduced")]
    NotReduced,
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error("curves share a component through the center")]
    CommonComponent,
    #[error("proximity inequality violated at vertex {0}")]
    ProximityViolation(usize),
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
    #[error("coordinate change is not invertible")]
    NonInvertible,
    #[error("mode not supported: {0}")]
    ModeUnsupported(String),
    #[error("schemes have overlapping support")]
    OverlappingSupport,
    #[error("position is symbolic; sample a representative first")]
    SymbolicPosition,
    #[error("existence condition failed: {0}")]
    ConditionFailed(String),
    #[error("verification failed: {0}")]
    VerificationFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
