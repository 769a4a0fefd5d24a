//! Pairwise distances and neighborhood graphs: plain K-NN and the dual
//! original/flipped protocol.

use std::io;

use thiserror::Error;

use crate::imgseq::ImageSet;

mod distance;
mod knn;

pub use distance::{distance_matrix, DistanceMatrix};
pub use knn::{abandon_reconfirm, dual_knn, dual_knn_initial, knn_plain, Neighbor, NeighborGraph, Split};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("no points")]
    Empty,
    #[error("vector {index} has dimension {actual}, expected {expected}")]
    Dimension { index: usize, expected: usize, actual: usize },
    #[error("distance table has {len} entries, expected {n}x{n}")]
    MatrixShape { n: usize, len: usize },
    #[error("distance entry ({row}, {col}) is invalid: {reason}")]
    InvalidDistance { row: usize, col: usize, reason: &'static str },
    #[error("size mismatch: expected {expected} points, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("edge {point} -> {neighbor} is invalid: {reason}")]
    InvalidEdge { point: usize, neighbor: usize, reason: &'static str },
    #[error("K = {k} is out of range for {n} points (need 1 <= K <= n - 1)")]
    KOutOfRange { k: usize, n: usize },
    #[error("K_t = {0} must be even")]
    OddKt(usize),
    #[error("K_t = {kt} is out of range for {n} originals (need 2 <= K_t <= n - 1)")]
    KtOutOfRange { kt: usize, n: usize },
    #[error("dual protocol needs a flip-augmented image set")]
    NotFlipAugmented,
    #[error("graph is not an unresolved dual-protocol graph with an even split")]
    NotPhaseOne,
    #[error("graph CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("graph CSV: {0}")]
    Io(#[from] io::Error),
}

/// Writes one `point,provenance,neighbor,distance` row per edge.
pub fn write_graph_csv<W: io::Write>(out: W, graph: &NeighborGraph, set: &ImageSet) -> Result<(), GraphError> {
    if graph.n() != set.len() {
        return Err(GraphError::SizeMismatch {
            expected: set.len(),
            actual: graph.n(),
        });
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["point", "provenance", "neighbor", "distance"])?;
    for i in 0..graph.n() {
        for nb in graph.neighbors(i) {
            w.write_record([
                i.to_string(),
                set.provenance(i).as_str().to_string(),
                nb.index.to_string(),
                nb.distance.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
