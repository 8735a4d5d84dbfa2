//! Error types shared by all subsystems.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A stated precondition does not hold for the given inputs.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The inputs are valid but outside what the exact path can enumerate.
    /// The message names the fallback when one exists.
    #[error("capability exceeded: {0}")]
    Capability(String),

    /// A conditioning event was too rare to rejection-sample; carries the
    /// pilot-run estimate of its probability.
    #[error("conditioning event too rare: pilot estimate {pilot:.3e} < {required:.1e}")]
    EventTooRare { pilot: f64, required: f64 },

    /// Quadrature failed to reach the requested tolerance; carries the
    /// partial value and the last refinement delta.
    #[error("quadrature tolerance not met: partial value {partial}, last delta {delta:.3e}")]
    ToleranceNotMet { partial: f64, delta: f64 },
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }
}
