use thiserror::Error;

/// Errors shared across the library.
///
/// Constructive operations verify their own output; any failed verification
/// surfaces as an error here rather than as a wrong answer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not alternating: {0}")]
    NotAlternating(String),

    #[error("map is not a morphism: {0}")]
    NotAMorphism(String),

    #[error("matrix is not invertible over the ring")]
    Singular,

    #[error("kernel is not a free direct summand over this ring")]
    NonFreeKernel,

    #[error("vector is not an arc: {0}")]
    NotAnArc(String),

    #[error("vectors do not form a jointly non-separating simplex: {0}")]
    NotBSimplex(String),

    #[error("not a simplex of the complex: {0}")]
    NotASimplex(String),

    #[error("form data is not realizable: {0}")]
    NotRealizable(String),

    #[error("ring not supported by this operation: {0}")]
    UnsupportedRing(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("no path found: {0}")]
    NoPath(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("rank cap exceeded: {0}")]
    CapExceeded(String),

    #[error("operation requires a finite ring")]
    InfiniteRing,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
