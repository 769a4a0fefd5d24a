use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{canonicalize, find_frontal, FrontalError, FrontalReport, Mode};
use crate::imgseq::{build_image_set, CropRect, GrayImage, ImageError, ImageSet, SetError};
use crate::lle::{lle_extended, lle_original, Embedding, LleError, DEFAULT_REG};

/// Which data and which LLE variant a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    /// Plain LLE on the original frames.
    I,
    /// Dual-protocol LLE on the originals and their mirrors.
    II,
    /// As `II`, on frames cropped to the head.
    III,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::I, Case::II, Case::III];

    pub fn is_extended(self) -> bool {
        self != Case::I
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
        })
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Case::I),
            "II" | "2" => Ok(Case::II),
            "III" | "3" => Ok(Case::III),
            other => Err(format!("unknown case {other:?} (expected I, II or III)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    /// Neighbor count for plain LLE.
    pub k: usize,
    /// Total neighbor count for the dual protocol.
    pub kt: usize,
    pub dim: usize,
    pub reg: f64,
}

impl Default for PipelineParams {
    fn default() -> Self {
        Self {
            k: 8,
            kt: 8,
            dim: 2,
            reg: DEFAULT_REG,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("case III needs a crop rectangle")]
    MissingCrop,
    #[error("crop: {0}")]
    Crop(#[from] ImageError),
    #[error("dataset: {0}")]
    Set(#[from] SetError),
    #[error("embedding: {0}")]
    Lle(#[from] LleError),
    #[error("frontal: {0}")]
    Frontal(#[from] FrontalError),
}

/// Builds the point set a case runs on: originals only for `I`, flip-augmented for `II`,
/// cropped and flip-augmented for `III`.
pub fn assemble(images: &[GrayImage], yaws: Option<&[f64]>, case: Case, crop: Option<CropRect>) -> Result<ImageSet, PipelineError> {
    match case {
        Case::I => Ok(build_image_set(images, yaws, false)?),
        Case::II => Ok(build_image_set(images, yaws, true)?),
        Case::III => {
            let rect = crop.ok_or(PipelineError::MissingCrop)?;
            let cropped = images.iter().map(|im| rect.apply(im)).collect::<Result<Vec<_>, _>>()?;
            Ok(build_image_set(&cropped, yaws, true)?)
        }
    }
}

pub fn embed_case(set: &ImageSet, case: Case, params: &PipelineParams) -> Result<Embedding, LleError> {
    if case.is_extended() {
        lle_extended(set, params.kt, params.dim, params.reg)
    } else {
        lle_original(set, params.k, params.dim, params.reg)
    }
}

/// Canonicalizes and picks the frontal frame; a failed vertex fit falls back to the discrete
/// rule and says so in the report.
pub fn identify(emb: &Embedding, set: &ImageSet, mode: Mode) -> Result<FrontalReport, FrontalError> {
    let canon = canonicalize(emb)?;
    match find_frontal(&canon, set, mode) {
        Err(FrontalError::FitDegenerate(a)) if mode == Mode::QuadraticVertex => {
            let mut report = find_frontal(&canon, set, Mode::Discrete)?;
            report.fallback = Some(format!("quadratic vertex fit degenerate (a = {a:e}); used Discrete"));
            Ok(report)
        }
        other => other,
    }
}
