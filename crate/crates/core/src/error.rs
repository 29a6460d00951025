use thiserror::Error;

/// Errors raised by model construction, numerics and I/O.
#[derive(Debug, Error)]
pub enum SosError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("Fock truncation insufficient: trace deficit {deficit:.3e} at dim {dim}")]
    Truncation { dim: usize, deficit: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("integration failed at t = {t:.6e}: {reason}")]
    Integration {
        t: f64,
        reason: String,
        steps: usize,
        rejected: usize,
    },

    #[error("aliasing check failed: doubling samples changed the component by {change:.3e}")]
    Aliasing { change: f64 },

    #[error("optimizer failure: {0}")]
    Optimizer(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SosError {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        SosError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            SosError::Integration { .. }
                | SosError::Aliasing { .. }
                | SosError::Optimizer(_)
                | SosError::Truncation { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, SosError>;
