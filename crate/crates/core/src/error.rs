//! Error type shared by all model layers.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An invariant on an input value was violated. `field` names the
    /// offending field so config errors point at the exact entry.
    #[error("validation failed for `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("duplicate profile name `{0}`")]
    DuplicateProfile(String),

    #[error("unknown profile `{0}`")]
    UnknownProfile(String),

    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("`{op}` requires a stacked (3D) profile")]
    RequiresStacked { op: &'static str },

    #[error("`{op}` is only defined for strap-family routing schemes")]
    RequiresStrap { op: &'static str },

    #[error("a layer count must be provided for stacked profiles")]
    MissingLayers,

    #[error("a layer count is not applicable to planar profiles")]
    ExtraneousLayers,

    #[error("minimum pitch must be positive")]
    InvalidMinPitch,

    #[error("layer range is empty or not increasing")]
    EmptyLayerRange,

    #[error("singular system: node {node} is floating")]
    SingularSystem { node: usize },

    #[error("waveform never settles within the simulated window")]
    Unsettled,

    #[error("charge audit interval contains a switch event at t = {0:e} s")]
    AuditSwitchEvent(f64),

    #[error("no source-free capacitive island to audit")]
    AuditNoIsland,

    #[error("free parameter `{0}` does not influence any anchor")]
    InsensitiveParameter(String),

    #[error("comparison needs at least two configurations")]
    ComparisonTooSmall,
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for invariant checks that should name the violated field.
pub fn ensure(cond: bool, field: &str, message: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation {
            field: field.to_string(),
            message: message.to_string(),
        })
    }
}
