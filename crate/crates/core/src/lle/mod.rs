//! Locally linear embedding: sum-to-one reconstruction weights and the spectral
//! embedding that preserves them.

use thiserror::Error;

use crate::graph::{distance_matrix, dual_knn, knn_plain, GraphError};
use crate::imgseq::ImageSet;

mod embed;
mod export;
mod weights;

pub use embed::{cost_matrix, embed, Embedding, NULL_TOL};
pub use export::{read_embedding_csv, write_embedding_csv, EmbeddingTable};
pub use weights::{local_weights, weight_matrix, WeightMatrix};

/// Regularization used when none is given.
pub const DEFAULT_REG: f64 = 0.3;

#[derive(Debug, Error)]
pub enum LleError {
    #[error("point {point} has no neighbors")]
    NoNeighbors { point: usize },
    #[error("neighbor has dimension {actual}, expected {expected}")]
    Dimension { expected: usize, actual: usize },
    #[error("non-finite value at point {point}")]
    NonFinite { point: usize },
    #[error("regularization must be finite and non-negative, got {0}")]
    Regularization(f64),
    #[error("weight row {point} sums to {sum}, not 1")]
    RowSum { point: usize, sum: f64 },
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("embedding dimension {d} is out of range for {n} points (need 1 <= d <= n - 2)")]
    DimOutOfRange { d: usize, n: usize },
    #[error("only {usable} non-null eigenvectors available, {requested} requested")]
    RankDeficient { requested: usize, usable: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("embedding CSV: {0}")]
    Csv(String),
}

impl LleError {
    fn at_point(self, i: usize) -> Self {
        match self {
            LleError::NoNeighbors { .. } => LleError::NoNeighbors { point: i },
            LleError::NonFinite { .. } => LleError::NonFinite { point: i },
            other => other,
        }
    }
}

/// Plain K-NN graph, weights, embedding.
pub fn lle_original(set: &ImageSet, k: usize, d: usize, reg: f64) -> Result<Embedding, LleError> {
    let dm = distance_matrix(set);
    let graph = knn_plain(&dm, k)?;
    let w = weight_matrix(set, &graph, reg)?;
    embed(&w, d)
}

/// Dual original/flipped graph over a flip-augmented set, then the same weights and embedding.
pub fn lle_extended(set: &ImageSet, kt: usize, d: usize, reg: f64) -> Result<Embedding, LleError> {
    let dm = distance_matrix(set);
    let graph = dual_knn(set, &dm, kt)?;
    let w = weight_matrix(set, &graph, reg)?;
    embed(&w, d)
}
