//! Error type shared by all simulator modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown port {port}: a lattice with {rings} rings carries ports -{rings}..={rings}")]
    UnknownPort { port: i32, rings: u32 },

    #[error("site index {index} out of range for {size} sites")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("matrix is not symmetric (max |M - M^T| = {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("sites {a} and {b} are not adjacent in the lattice")]
    EdgeNotAdjacent { a: usize, b: usize },

    #[error("coupling for adjacent edge ({a}, {b}) is missing and no fill value was given")]
    MissingEdgeCoupling { a: usize, b: usize },

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("indistinguishability {0} lies outside [0, 1]")]
    IndistinguishabilityOutOfRange(f64),

    #[error("distribution or matrix has zero total mass")]
    ZeroMass,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("non-positive sample: {0}")]
    NonPositiveSample(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("correlation matrix is not normalized over unordered pairs (sum = {sum})")]
    UnnormalizedInput { sum: f64 },

    #[error("detection efficiency for channel {channel} must lie in (0, 1]")]
    InvalidEfficiency { channel: usize },

    #[error("delay scan has no baseline samples at |delay| >= 5 coherence times")]
    NoBaseline,

    #[error("delay scan does not sample the zero-delay point")]
    MissingZeroDelay,

    #[error("fit failed: {0}")]
    FitFailure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Parse(String),
}
