use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate cell: |a1 x a2| = {cross:e}")]
    DegenerateCell { cross: f64 },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("non-finite value in {context}")]
    NonFiniteValue { context: String },

    #[error("too few samples: need at least {needed}, have {have}")]
    TooFewSamples { needed: usize, have: usize },

    #[error("invalid chain parameters: {0}")]
    InvalidChain(String),

    #[error("hilbert space dimension {dimension} exceeds the dense budget {budget}")]
    DimensionBudgetExceeded { dimension: usize, budget: usize },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("wavevector {0:?} is not commensurate with the periodic grid")]
    IncommensurateWavevector([f64; 2]),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("band limit violated: {0}")]
    BandLimitViolated(String),

    #[error("non-positive double-commutator denominator {0:e}")]
    NonPositiveDenominator(f64),

    #[error("potential kind mismatch: {reason}")]
    KindMismatch {
        bound: Option<crate::bounds::BoundKind>,
        reason: String,
    },

    #[error("need at least {needed} points spanning a decade, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("non-positive value {value:e} at k = {k:e}")]
    NonPositiveValue { k: f64, value: f64 },

    #[error("wavevector class mismatch: expected {expected}, got {got}")]
    WaveClassMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("kernel is not hermitian (max deviation {0:e})")]
    NonHermitianKernel(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("invalid configuration at `{field}`: {reason}")]
    ConfigInvalid { field: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
