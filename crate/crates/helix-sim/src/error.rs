use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// A value fed to a computation violates its precondition (non-finite,
    /// negative where positive is required, out of model range).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration combination is rejected before any simulation work.
    /// The message names the offending keys.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A sampling plane lies outside the simulated wake extent.
    #[error("plane at {plane_x:.1} m is outside the wake extent (0, {x_max:.1}] m")]
    PlaneOutOfExtent { plane_x: f64, x_max: f64 },

    /// The post-warmup record is too short for whole-period aggregation.
    #[error("aggregation window too short: {0}")]
    InsufficientSpan(String),
}

pub type Result<T> = std::result::Result<T, SimError>;

pub(crate) fn ensure_finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(SimError::InvalidInput(format!(
            "{what} must be finite, got {value}"
        )))
    }
}
