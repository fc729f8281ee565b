use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid index range {lo}..={hi}")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("index {n} is below the minimum {min} for this operation")]
    IndexTooSmall { n: u64, min: u64 },

    /// The characteristic cubic does not have one real and two complex roots.
    #[error("discriminant is not positive (delta = {delta}); closed forms need one real and two complex roots")]
    DeltaNotPositive { delta: String },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("root refinement did not reach tolerance: residual {residual:e} > {tolerance:e}")]
    RootNotConverged { residual: f64, tolerance: f64 },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}
