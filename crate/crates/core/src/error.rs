use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("element is a zero divisor and has no inverse")]
    ZeroDivisor,
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("unsupported spatial dimension {0} (supported: {1})")]
    UnsupportedDimension(usize, &'static str),
    #[error("grid too narrow: half-width {half_width} < required {required}")]
    GridTooNarrow { half_width: f64, required: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("invalid fertility distribution: {0}")]
    InvalidFertility(String),
    #[error("population exceeded cap of {cap} particles at t = {time}")]
    PopulationExplosion { cap: usize, time: f64 },
    #[error("solution left [0, 1] at t = {time}: value {value}")]
    StabilityViolation { time: f64, value: f64 },
    #[error("no convergence after {iterations} iterations (last update {last_update:e})")]
    NoConvergence { iterations: usize, last_update: f64 },
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
