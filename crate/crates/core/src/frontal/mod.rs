//! Frontal-view identification: orient the embedded pose curve, take its lowest
//! original point, and score the result against ground truth.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imgseq::{ImageSet, Provenance};
use crate::lle::Embedding;

mod canonical;
mod pipeline;

pub use canonical::{canonicalize, quadratic_fit, QuadraticFit};
pub use pipeline::{assemble, embed_case, identify, Case, PipelineError, PipelineParams};

#[derive(Debug, Error)]
pub enum FrontalError {
    #[error("expected a 2-D embedding, got {0}-D")]
    Dimension(usize),
    #[error("need at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("point cloud is degenerate: minor variance {minor:e} vs major {major:e}")]
    Degenerate { minor: f64, major: f64 },
    #[error("quadratic fit does not open upward (a = {0:e})")]
    FitDegenerate(f64),
    #[error("embedding has {embedding} rows but the image set has {set} points")]
    SizeMismatch { embedding: usize, set: usize },
    #[error("image set has no original points")]
    NoOriginals,
    #[error("no reports to evaluate")]
    NoReports,
    #[error("report {0} has no ground-truth error")]
    MissingError(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Lowest original point on the canonical axis 2.
    Discrete,
    /// Original point nearest the vertex of a fitted parabola.
    QuadraticVertex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontalReport {
    pub identified_index: usize,
    pub identified_yaw: Option<f64>,
    pub true_frontal_yaw: Option<f64>,
    pub abs_error: Option<f64>,
    pub vertex_coords: [f64; 2],
    pub mode: Mode,
    /// Set when a vertex fit failed and the discrete rule was used instead.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
}

/// Picks the frontal frame from a canonical embedding aligned with `set`.
pub fn find_frontal(emb: &Embedding, set: &ImageSet, mode: Mode) -> Result<FrontalReport, FrontalError> {
    if emb.dim() != 2 {
        return Err(FrontalError::Dimension(emb.dim()));
    }
    if emb.n() != set.len() {
        return Err(FrontalError::SizeMismatch {
            embedding: emb.n(),
            set: set.len(),
        });
    }
    let originals = set.indices_of(Provenance::Original);
    if originals.is_empty() {
        return Err(FrontalError::NoOriginals);
    }
    let identified_index = match mode {
        Mode::Discrete => *originals
            .iter()
            .min_by(|&&a, &&b| emb.get(a, 1).total_cmp(&emb.get(b, 1)).then(a.cmp(&b)))
            .expect("nonempty"),
        Mode::QuadraticVertex => {
            let pts: Vec<[f64; 2]> = (0..emb.n()).map(|i| [emb.get(i, 0), emb.get(i, 1)]).collect();
            let fit = quadratic_fit(&pts).ok_or(FrontalError::FitDegenerate(f64::NAN))?;
            if fit.a.is_nan() || fit.a <= 0.0 || fit.a.abs() < 1e-12 {
                return Err(FrontalError::FitDegenerate(fit.a));
            }
            let x = -fit.b / (2.0 * fit.a);
            *originals
                .iter()
                .min_by(|&&a, &&b| {
                    (emb.get(a, 0) - x)
                        .abs()
                        .total_cmp(&(emb.get(b, 0) - x).abs())
                        .then(a.cmp(&b))
                })
                .expect("nonempty")
        }
    };
    let identified_yaw = set.point(identified_index).yaw;
    let true_frontal_yaw = originals
        .iter()
        .filter_map(|&i| set.point(i).yaw)
        .find(|&y| y == 0.0)
        .map(|_| 0.0);
    let abs_error = match (identified_yaw, true_frontal_yaw) {
        (Some(w), Some(v)) => Some((w - v).abs()),
        _ => None,
    };
    Ok(FrontalReport {
        identified_index,
        identified_yaw,
        true_frontal_yaw,
        abs_error,
        vertex_coords: [emb.get(identified_index, 0), emb.get(identified_index, 1)],
        mode,
        fallback: None,
    })
}

/// Mean and population standard deviation of the absolute errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyStats {
    pub u: f64,
    pub sigma: f64,
    pub count: usize,
}

pub fn evaluate(reports: &[FrontalReport]) -> Result<AccuracyStats, FrontalError> {
    if reports.is_empty() {
        return Err(FrontalError::NoReports);
    }
    let errors = reports
        .iter()
        .enumerate()
        .map(|(i, r)| r.abs_error.ok_or(FrontalError::MissingError(i)))
        .collect::<Result<Vec<f64>, _>>()?;
    Ok(stats(&errors))
}

pub(crate) fn stats(errors: &[f64]) -> AccuracyStats {
    let count = errors.len();
    let u = errors.iter().sum::<f64>() / count as f64;
    let var = errors.iter().map(|e| (e - u) * (e - u)).sum::<f64>() / count as f64;
    AccuracyStats {
        u,
        sigma: var.sqrt(),
        count,
    }
}

/// One published cell of FacePix accuracy (30 subjects, 128x128 images).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCell {
    pub spec: &'static str,
    pub case: Case,
    pub u: f64,
    pub sigma: f64,
}

/// Published FacePix results, kept for documentation and side-by-side printing. They cannot
/// be reproduced here because the FacePix images are not redistributable.
pub const FACEPIX_REFERENCE: [ReferenceCell; 6] = [
    ReferenceCell { spec: "-90:1:60", case: Case::I, u: 10.1, sigma: 5.7 },
    ReferenceCell { spec: "-90:1:60", case: Case::II, u: 5.8, sigma: 3.6 },
    ReferenceCell { spec: "-90:1:60", case: Case::III, u: 4.2, sigma: 3.1 },
    ReferenceCell { spec: "-90:1:30", case: Case::I, u: 22.8, sigma: 5.1 },
    ReferenceCell { spec: "-90:1:30", case: Case::II, u: 5.2, sigma: 2.9 },
    ReferenceCell { spec: "-90:1:30", case: Case::III, u: 4.5, sigma: 3.4 },
];
