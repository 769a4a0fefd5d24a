//! Procedural head renderer.
//!
//! The head is an ellipse (horizontal radius `R`, vertical `1.25 R`) read as the visible
//! half of a textured sphere. Each head pixel maps back to a sphere longitude
//! `psi = asin(dx / (R * sqrt(1 - lat^2))) - yaw` and latitude `lat = dy / (1.25 R)`, where
//! the face texture lives:
//!
//! * nose, mouth and a pair of eyes as Gaussian dark spots around `psi = 0`,
//! * hair over the back of the head (`cos psi < 0`) and the crown,
//! * a mirror-symmetric value-noise skin texture fixed per identity.
//!
//! Asymmetry (strength `s`) adds a left-right brightness ramp `0.05 s dx / R`, a blemish at
//! `psi = blemish_phi`, and a sub-pixel horizontal shift of the head. With `s = 0` and a
//! flat background, `flip(render(yaw)) == render(-yaw)` holds exactly.

use serde::{Deserialize, Serialize};

use super::{SplitMix64, SynthError};
use crate::imgseq::{quantize, CropRect, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BackgroundKind {
    Flat,
    Gradient,
    NoiseTexture,
}

/// Appearance of one synthetic subject. Lengths are fractions of the image size; intensities
/// are in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub seed: u64,
    /// Horizontal head radius, in `[0.26, 0.32]`.
    pub head_radius: f64,
    /// Sine of the eye longitude, in `[0.35, 0.5]`.
    pub eye_offset: f64,
    /// In `[0.6, 0.8]`.
    pub skin: f64,
    /// Eye darkening, in `[0.3, 0.45]`.
    pub eye: f64,
    /// In `[0.1, 0.2]`.
    pub nose: f64,
    /// In `[0.2, 0.35]`.
    pub mouth: f64,
    /// Hair intensity, in `[0.1, 0.25]`.
    pub hair: f64,
    /// In `[0, 1]`; drawn from `[0.3, 0.7]`.
    pub asymmetry_strength: f64,
    pub background_kind: BackgroundKind,
    /// In `[0.1, 0.35]`.
    pub background_level: f64,
    /// Left-to-right ramp of a gradient background, in `[0.04, 0.1]`.
    pub background_slope: f64,
    /// Blemish longitude in radians, in `[0.4, 0.8]`.
    pub blemish_phi: f64,
    /// Horizontal head shift in pixels, magnitude in `[0.3, 0.8]`; applied only when asymmetric.
    pub head_shift: f64,
    /// Seeds the background and skin textures.
    pub texture_seed: u64,
}

/// Deterministic identity; every field is drawn in declaration order from `SplitMix64(seed)`.
pub fn make_identity(seed: u64) -> IdentityParams {
    let mut r = SplitMix64::new(seed);
    let head_radius = r.uniform(0.26, 0.32);
    let eye_offset = r.uniform(0.35, 0.5);
    let skin = r.uniform(0.6, 0.8);
    let eye = r.uniform(0.3, 0.45);
    let nose = r.uniform(0.1, 0.2);
    let mouth = r.uniform(0.2, 0.35);
    let hair = r.uniform(0.1, 0.25);
    let asymmetry_strength = r.uniform(0.3, 0.7);
    let background_kind = match r.next_u64() % 3 {
        0 => BackgroundKind::Flat,
        1 => BackgroundKind::Gradient,
        _ => BackgroundKind::NoiseTexture,
    };
    let background_level = r.uniform(0.1, 0.35);
    let background_slope = r.uniform(0.04, 0.1);
    let blemish_phi = r.uniform(0.4, 0.8);
    let shift = r.uniform(0.3, 0.8);
    let head_shift = if r.next_f64() < 0.5 { shift } else { -shift };
    let texture_seed = r.next_u64();
    IdentityParams {
        seed,
        head_radius,
        eye_offset,
        skin,
        eye,
        nose,
        mouth,
        hair,
        asymmetry_strength,
        background_kind,
        background_level,
        background_slope,
        blemish_phi,
        head_shift,
        texture_seed,
    }
}

impl IdentityParams {
    pub fn with_asymmetry(mut self, strength: f64) -> Self {
        self.asymmetry_strength = strength.clamp(0.0, 1.0);
        self
    }

    pub fn with_background(mut self, kind: BackgroundKind) -> Self {
        self.background_kind = kind;
        self
    }

    fn center(&self, size: usize) -> (f64, f64) {
        let mid = (size as f64 - 1.0) / 2.0;
        let shift = if self.asymmetry_strength > 0.0 { self.head_shift } else { 0.0 };
        (mid + shift, mid)
    }

    fn radii(&self, size: usize) -> (f64, f64) {
        let r = self.head_radius * size as f64;
        (r, 1.25 * r)
    }
}

const GRID_BG: usize = 8;
const SKIN_COLS: usize = 12;
const SKIN_ROWS: usize = 8;

fn texture_grid(seed: u64, rows: usize, cols: usize, amplitude: f64) -> Vec<Vec<f64>> {
    let mut r = SplitMix64::new(seed);
    (0..=rows)
        .map(|_| (0..=cols).map(|_| r.uniform(-amplitude, amplitude)).collect())
        .collect()
}

fn lerp_grid(grid: &[Vec<f64>], u: f64, v: f64, cols: usize, rows: usize, smooth: bool) -> f64 {
    let i = (u as usize).min(cols - 1);
    let j = (v as usize).min(rows - 1);
    let (mut fu, mut fv) = (u - i as f64, v - j as f64);
    if smooth {
        fu = fu * fu * (3.0 - 2.0 * fu);
        fv = fv * fv * (3.0 - 2.0 * fv);
    }
    grid[j][i] * (1.0 - fu) * (1.0 - fv)
        + grid[j][i + 1] * fu * (1.0 - fv)
        + grid[j + 1][i] * (1.0 - fu) * fv
        + grid[j + 1][i + 1] * fu * fv
}

fn gauss(d: f64, s: f64) -> f64 {
    (-d * d / (2.0 * s * s)).exp()
}

fn check(yaw: f64, size: usize) -> Result<(), SynthError> {
    if !(-90.0..=90.0).contains(&yaw) {
        return Err(SynthError::Yaw(yaw));
    }
    if size < 32 {
        return Err(SynthError::Size(size));
    }
    Ok(())
}

/// Renders the subject at `yaw` degrees on a `size x size` canvas, quantized to 8 bits.
pub fn render_head(id: &IdentityParams, yaw: f64, size: usize) -> Result<GrayImage, SynthError> {
    check(yaw, size)?;
    let (cx, cy) = id.center(size);
    let (rx, ry) = id.radii(size);
    let yaw_rad = yaw.to_radians();
    let eye_phi = id.eye_offset.asin();
    let s = id.asymmetry_strength;
    let last = size as f64 - 1.0;
    let bg_grid = (id.background_kind == BackgroundKind::NoiseTexture)
        .then(|| texture_grid(id.texture_seed, GRID_BG, GRID_BG, 0.05));
    let skin_grid = texture_grid(id.texture_seed ^ 0x5555, SKIN_ROWS, SKIN_COLS, 0.12);

    Ok(GrayImage::from_fn(size, size, |x, y| {
        let (xf, yf) = (x as f64, y as f64);
        let background = match id.background_kind {
            BackgroundKind::Flat => id.background_level,
            BackgroundKind::Gradient => id.background_level + id.background_slope * (xf / last - 0.5),
            BackgroundKind::NoiseTexture => {
                let g = GRID_BG as f64;
                let grid = bg_grid.as_ref().expect("texture grid built for this kind");
                id.background_level + lerp_grid(grid, xf / last * g, yf / last * g, GRID_BG, GRID_BG, false)
            }
        };

        let (dx, dy) = (xf - cx, yf - cy);
        let rho = ((dx / rx).powi(2) + (dy / ry).powi(2)).sqrt();
        let mask = ((1.0 - rho) * rx + 0.5).clamp(0.0, 1.0);
        let lat = (dy / ry).clamp(-1.0, 1.0);
        let half = (1.0 - lat * lat).max(1e-12).sqrt();
        let psi = (dx / (rx * half)).clamp(-1.0, 1.0).asin() - yaw_rad;

        let eyes = gauss(psi - eye_phi, 0.13) * gauss(lat + 0.2, 0.08) * id.eye
            + gauss(psi + eye_phi, 0.13) * gauss(lat + 0.2, 0.08) * id.eye;
        let dark = gauss(psi, 0.12) * gauss(lat - 0.05, 0.12) * id.nose
            + gauss(psi, 0.3) * gauss(lat - 0.45, 0.07) * id.mouth
            + eyes;
        let back_hair = 1.0 / (1.0 + (psi.cos() / 0.08).exp());
        let crown = 1.0 / (1.0 + ((lat + 0.55) / 0.06).exp());
        let hair = back_hair.max(crown);
        let skin_tex = lerp_grid(
            &skin_grid,
            (psi.abs() / std::f64::consts::PI).clamp(0.0, 1.0) * SKIN_COLS as f64,
            (lat + 1.0) / 2.0 * SKIN_ROWS as f64,
            SKIN_COLS,
            SKIN_ROWS,
            true,
        );
        let mut face = (id.skin + skin_tex - dark) * (1.0 - hair) + id.hair * hair;
        if s > 0.0 {
            face += s * 0.05 * (dx / rx);
            face -= 0.25 * s * gauss(psi - id.blemish_phi, 0.15) * gauss(lat - 0.2, 0.12);
        }
        let v = (background * (1.0 - mask) + face * mask).clamp(0.0, 1.0);
        f64::from(quantize(v)) / 255.0
    }))
}

/// Fixed rectangle around the head: half-widths `floor(0.75 R)` and `floor(0.75 * 1.25 R)`
/// about the rounded head center.
pub fn head_crop(id: &IdentityParams, size: usize) -> CropRect {
    let (cx, cy) = id.center(size);
    let (rx, ry) = id.radii(size);
    let hw = (0.75 * rx).floor() as usize;
    let hh = (0.75 * ry).floor() as usize;
    let left = (cx + 0.5).floor() as usize - hw;
    let top = (cy + 0.5).floor() as usize - hh;
    CropRect {
        left,
        top,
        width: 2 * hw + 1,
        height: 2 * hh + 1,
    }
}

pub fn render_cropped(id: &IdentityParams, yaw: f64, size: usize) -> Result<GrayImage, SynthError> {
    let full = render_head(id, yaw, size)?;
    Ok(head_crop(id, size).apply(&full).expect("head crop lies inside the canvas"))
}

/// Whether pixel `(x, y)` of a `size` canvas lies inside the head ellipse.
pub fn inside_head(id: &IdentityParams, size: usize, x: f64, y: f64) -> bool {
    let (cx, cy) = id.center(size);
    let (rx, ry) = id.radii(size);
    ((x - cx) / rx).powi(2) + ((y - cy) / ry).powi(2) <= 1.0
}
