use thiserror::Error;

/// Errors surfaced by the model and its front ends.
#[derive(Debug, Error)]
pub enum ObsError {
    /// Burst/slot durations that do not define an integer slot count.
    #[error("invalid timing: {0}")]
    InvalidTiming(String),

    /// A parameter outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Occupancy index outside 1..=min(slots_per_burst, wavelengths).
    #[error("occupancy {occupancy} outside 1..={max}")]
    OccupancyOutOfRange { occupancy: u32, max: u32 },

    /// Arrival probability of zero: the node never leaves the empty state,
    /// so callers should report zero loss instead of evaluating the model.
    #[error("arrival probability is zero; the loss rate is zero by convention")]
    DegenerateArrival,
}

impl ObsError {
    pub(crate) fn invalid_timing(msg: impl Into<String>) -> Self {
        ObsError::InvalidTiming(msg.into())
    }

    pub(crate) fn invalid_parameter(msg: impl Into<String>) -> Self {
        ObsError::InvalidParameter(msg.into())
    }
}
