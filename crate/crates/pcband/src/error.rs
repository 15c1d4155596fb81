//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A profile (or a shifted profile) failed the strict positivity check.
    #[error("profile is not strictly positive: certified minimum {min:.6e}")]
    NonPositiveProfile { min: f64 },

    /// Malformed or inconsistent profile data (file input, coefficient maps).
    #[error("invalid profile data: {0}")]
    InvalidProfile(String),

    /// A caller-supplied argument violates a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The adaptive integrator could not continue without shrinking the step
    /// below the representable limit.
    #[error("integration step underflow at x = {x:.9e}")]
    StepUnderflow { x: f64 },

    /// A root search ran out of bracket: the scanned window is reported so
    /// the caller can widen it.
    #[error("root bracket exhausted in [{lo:.6e}, {hi:.6e}]")]
    BracketExhausted { lo: f64, hi: f64 },

    /// The discriminant scan could not validate the band layout even after
    /// refinement.
    #[error("discriminant scan failed over [{lo:.6e}, {hi:.6e}]: {detail}")]
    ScanFailed { lo: f64, hi: f64, detail: String },

    /// The mass matrix of the plane-wave problem is not positive definite.
    #[error("mass matrix is not positive definite at leading minor {minor}")]
    NotPositiveDefinite { minor: usize },

    /// Dense eigensolver failure.
    #[error("eigensolver failed: {0}")]
    Eigen(String),

    /// A computed quantity failed its accuracy postcondition.
    #[error("accuracy loss: {0}")]
    AccuracyLoss(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
