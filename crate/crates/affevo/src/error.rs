//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample count {n} is not a power of two")]
    SampleCountNotPowerOfTwo { n: usize },

    #[error("sample count {n} too small (need at least {min})")]
    SampleCountTooSmall { n: usize, min: usize },

    #[error("curve spec is empty or degenerate: {reason}")]
    EmptySpec { reason: String },

    #[error(
        "sampled data is undersampled: trailing spectrum fraction {fraction:.3e} \
         exceeds threshold {threshold:.3e}"
    )]
    Undersampled { fraction: f64, threshold: f64 },

    #[error("curve has an affine inflexion: min |kappa| = {min_kappa:.6e} <= {threshold:.3e}")]
    Inflexional { min_kappa: f64, threshold: f64 },

    #[error("kappa changes sign over the grid: affine arclength is undefined")]
    KappaSignChange,

    #[error("negative alpha ({alpha}) is unsupported: only the branch alpha in [0, 1] is built")]
    NegativeAlpha { alpha: f64 },

    #[error("alpha = {alpha} outside the valid range {range}")]
    AlphaOutOfRange { alpha: f64, range: &'static str },

    #[error("evolutoid denominator (1-a)^2 + mu a^2 = {value:.3e} below threshold {threshold:.3e}")]
    DenominatorUnderflow { value: f64, threshold: f64 },

    #[error("classification requested at a non-root: |g({s0}, {alpha})| = {g:.3e} > {tolerance:.3e}")]
    NotASingularPoint {
        s0: f64,
        alpha: f64,
        g: f64,
        tolerance: f64,
    },

    #[error("affine curvature mu({s0}) = {mu:.3e} is below threshold; classification hypotheses fail")]
    MuNearZero { s0: f64, mu: f64 },

    #[error("Monge coefficient a2 must be nonzero")]
    MongeA2Zero,

    #[error("degenerate alpha range [{lo}, {hi}]")]
    DegenerateAlphaRange { lo: f64, hi: f64 },

    #[error("alpha grid needs at least 2 levels, got {n}")]
    AlphaGridTooSmall { n: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NewtonDidNotConverge { iterations: usize, residual: f64 },

    #[error("lines are parallel (direction cross product {cross:.3e})")]
    ParallelLines { cross: f64 },

    #[error("array of length {len} is shorter than the {stencil}-point stencil")]
    StencilTooShort { len: usize, stencil: usize },

    #[error("finite-difference order {order} not supported (1..=3)")]
    UnsupportedFdOrder { order: usize },

    #[error("step size {step:.3e} underflows the usable resolution {limit:.3e}")]
    StepUnderflow { step: f64, limit: f64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable process exit class for the CLI: 3 inflexion rejection, 4 numerical failure.
    pub fn exit_class(&self) -> u8 {
        match self {
            Error::Inflexional { .. } | Error::KappaSignChange => 3,
            Error::SampleCountNotPowerOfTwo { .. }
            | Error::SampleCountTooSmall { .. }
            | Error::EmptySpec { .. }
            | Error::NegativeAlpha { .. }
            | Error::AlphaOutOfRange { .. }
            | Error::DegenerateAlphaRange { .. }
            | Error::AlphaGridTooSmall { .. }
            | Error::MongeA2Zero => 2,
            _ => 4,
        }
    }
}
