//! Deterministic synthetic data: rendered head sweeps standing in for FacePix, and an
//! analytic curve for oracle tests.

use thiserror::Error;

mod curve;
mod face;
mod rng;

pub use curve::{curve_dataset, curve_point};
pub use face::{head_crop, inside_head, make_identity, render_cropped, render_head, BackgroundKind, IdentityParams};
pub use rng::SplitMix64;

/// Default canvas edge in pixels.
pub const DEFAULT_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("yaw {0} is outside [-90, 90]")]
    Yaw(f64),
    #[error("image size {0} is below 32")]
    Size(usize),
    #[error("curve needs at least 8 points, got {0}")]
    CurvePoints(usize),
    #[error("curve needs ambient dimension >= 2, got {0}")]
    CurveDim(usize),
    #[error("noise scale must be finite and non-negative, got {0}")]
    Noise(f64),
}
