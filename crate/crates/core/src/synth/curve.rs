use super::{SplitMix64, SynthError};
use crate::imgseq::ImageSet;

/// Point on the reference curve for parameter `t` in `[-1, 1]`:
/// `gamma(t) = (t, t^2, 0.05 sin(pi t), 0.05 sin(2 pi t) / 2, ..., 0.05 sin((D-2) pi t) / (D-2))`.
pub fn curve_point(t: f64, ambient_dim: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (0..ambient_dim)
        .map(|k| match k {
            0 => t,
            1 => t * t,
            _ => {
                let m = (k - 1) as f64;
                0.05 * (m * pi * t).sin() / m
            }
        })
        .collect()
}

/// `n` evenly spaced samples of [`curve_point`] over `t in [-1, 1]` plus Gaussian noise of
/// scale `noise` per coordinate. Each point's `t` is stored as its yaw.
pub fn curve_dataset(n: usize, ambient_dim: usize, noise: f64, seed: u64) -> Result<ImageSet, SynthError> {
    if n < 8 {
        return Err(SynthError::CurvePoints(n));
    }
    if ambient_dim < 2 {
        return Err(SynthError::CurveDim(ambient_dim));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(SynthError::Noise(noise));
    }
    let mut rng = SplitMix64::new(seed);
    let ts: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
    let vectors = ts
        .iter()
        .map(|&t| {
            curve_point(t, ambient_dim)
                .into_iter()
                .map(|v| v + noise * rng.normal())
                .collect()
        })
        .collect();
    Ok(ImageSet::from_vectors(vectors, Some(ts)).expect("uniform nonempty vectors"))
}
