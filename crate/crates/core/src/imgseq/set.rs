use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::image::GrayImage;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error("image set is empty")]
    Empty,
    #[error("image {index} is {width}x{height}, expected {expected_width}x{expected_height}")]
    ImageSize {
        index: usize,
        width: usize,
        height: usize,
        expected_width: usize,
        expected_height: usize,
    },
    #[error("{yaws} yaw labels for {images} images")]
    YawCount { images: usize, yaws: usize },
    #[error("point {index} has dimension {actual}, expected {expected}")]
    Dimension {
        index: usize,
        expected: usize,
        actual: usize,
    },
    #[error("point {index} breaks the flip-augmented layout: {reason}")]
    Layout { index: usize, reason: &'static str },
}

/// Whether a point is an input frame or the horizontal mirror of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Original,
    Flipped,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Original => "original",
            Provenance::Flipped => "flipped",
        }
    }

    pub fn other(self) -> Self {
        match self {
            Provenance::Original => Provenance::Flipped,
            Provenance::Flipped => Provenance::Original,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub vector: Vec<f64>,
    pub provenance: Provenance,
    /// Index of the original frame this point came from.
    pub source_index: usize,
    pub yaw: Option<f64>,
}

/// Ordered feature vectors. A flip-augmented set of `n` frames holds `2n` points and
/// point `n + i` is the mirror of point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageSet {
    dim: usize,
    points: Vec<Point>,
}

impl ImageSet {
    /// Validates dimensions and, when any point is `Flipped`, the augmented layout.
    pub fn from_points(points: Vec<Point>) -> Result<Self, SetError> {
        let first = points.first().ok_or(SetError::Empty)?;
        let dim = first.vector.len();
        for (index, p) in points.iter().enumerate() {
            if p.vector.len() != dim {
                return Err(SetError::Dimension {
                    index,
                    expected: dim,
                    actual: p.vector.len(),
                });
            }
        }
        if points.iter().any(|p| p.provenance == Provenance::Flipped) {
            check_augmented_layout(&points)?;
        } else if let Some(index) = points.iter().enumerate().position(|(i, p)| p.source_index != i) {
            return Err(SetError::Layout {
                index,
                reason: "original source_index must equal position",
            });
        }
        Ok(Self { dim, points })
    }

    /// Unaugmented set of original points from raw vectors.
    pub fn from_vectors(vectors: Vec<Vec<f64>>, yaws: Option<Vec<f64>>) -> Result<Self, SetError> {
        if let Some(y) = &yaws {
            if y.len() != vectors.len() {
                return Err(SetError::YawCount {
                    images: vectors.len(),
                    yaws: y.len(),
                });
            }
        }
        let points = vectors
            .into_iter()
            .enumerate()
            .map(|(i, vector)| Point {
                vector,
                provenance: Provenance::Original,
                source_index: i,
                yaw: yaws.as_ref().map(|y| y[i]),
            })
            .collect();
        Self::from_points(points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.points[i].vector
    }

    pub fn provenance(&self, i: usize) -> Provenance {
        self.points[i].provenance
    }

    pub fn yaws(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.yaw).collect()
    }

    /// Number of original frames.
    pub fn original_count(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.provenance == Provenance::Original)
            .count()
    }

    pub fn is_flip_augmented(&self) -> bool {
        self.points.len() % 2 == 0 && check_augmented_layout(&self.points).is_ok()
    }

    /// Index of the mirror partner of point `i` in an augmented set.
    pub fn partner(&self, i: usize) -> Option<usize> {
        if !self.is_flip_augmented() {
            return None;
        }
        let n = self.points.len() / 2;
        Some(if i < n { i + n } else { i - n })
    }

    /// Indices of every point with the given provenance, in order.
    pub fn indices_of(&self, provenance: Provenance) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.provenance == provenance)
            .map(|(i, _)| i)
            .collect()
    }
}

fn check_augmented_layout(points: &[Point]) -> Result<(), SetError> {
    if points.len() % 2 != 0 {
        return Err(SetError::Layout {
            index: points.len() - 1,
            reason: "augmented set must hold an even number of points",
        });
    }
    let n = points.len() / 2;
    for (index, p) in points.iter().enumerate() {
        let (expected, source) = if index < n {
            (Provenance::Original, index)
        } else {
            (Provenance::Flipped, index - n)
        };
        if p.provenance != expected {
            return Err(SetError::Layout {
                index,
                reason: "originals must precede their flipped copies",
            });
        }
        if p.source_index != source {
            return Err(SetError::Layout {
                index,
                reason: "source_index does not match the original position",
            });
        }
        if index >= n {
            match (points[source].yaw, p.yaw) {
                (None, None) => {}
                (Some(a), Some(b)) if b == -a => {}
                _ => {
                    return Err(SetError::Layout {
                        index,
                        reason: "flipped yaw must negate the original yaw",
                    })
                }
            }
        }
    }
    Ok(())
}

/// Flattens images row-major; with `augment`, appends each image's mirror in order.
pub fn build_image_set(images: &[GrayImage], yaws: Option<&[f64]>, augment: bool) -> Result<ImageSet, SetError> {
    let first = images.first().ok_or(SetError::Empty)?;
    let (w, h) = (first.width(), first.height());
    for (index, img) in images.iter().enumerate() {
        if img.width() != w || img.height() != h {
            return Err(SetError::ImageSize {
                index,
                width: img.width(),
                height: img.height(),
                expected_width: w,
                expected_height: h,
            });
        }
    }
    if let Some(y) = yaws {
        if y.len() != images.len() {
            return Err(SetError::YawCount {
                images: images.len(),
                yaws: y.len(),
            });
        }
    }
    let n = images.len();
    let mut points = Vec::with_capacity(if augment { 2 * n } else { n });
    for (i, img) in images.iter().enumerate() {
        points.push(Point {
            vector: img.pixels().to_vec(),
            provenance: Provenance::Original,
            source_index: i,
            yaw: yaws.map(|y| y[i]),
        });
    }
    if augment {
        for (i, img) in images.iter().enumerate() {
            points.push(Point {
                vector: img.flip_horizontal().into_pixels(),
                provenance: Provenance::Flipped,
                source_index: i,
                yaw: yaws.map(|y| -y[i]),
            });
        }
    }
    ImageSet::from_points(points)
}
