use rayon::prelude::*;

use super::GraphError;
use crate::imgseq::ImageSet;

/// Dense symmetric matrix of pairwise Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Exact pairwise distances between equal-length vectors.
    pub fn from_vectors<V: AsRef<[f64]> + Sync>(vectors: &[V]) -> Result<Self, GraphError> {
        let n = vectors.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let dim = vectors[0].as_ref().len();
        if let Some(index) = vectors.iter().position(|v| v.as_ref().len() != dim) {
            return Err(GraphError::Dimension {
                index,
                expected: dim,
                actual: vectors[index].as_ref().len(),
            });
        }
        // upper triangle per row, mirrored afterwards so d[i][j] and d[j][i] are the same float
        let upper: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let a = vectors[i].as_ref();
                (i + 1..n).map(|j| euclidean(a, vectors[j].as_ref())).collect()
            })
            .collect();
        let mut data = vec![0.0; n * n];
        for (i, row) in upper.into_iter().enumerate() {
            for (off, d) in row.into_iter().enumerate() {
                let j = i + 1 + off;
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Ok(Self { n, data })
    }

    /// Wraps a row-major `n x n` table, checking the metric-matrix invariants.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if data.len() != n * n {
            return Err(GraphError::MatrixShape { n, len: data.len() });
        }
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(GraphError::InvalidDistance {
                    row: i,
                    col: i,
                    reason: "diagonal must be zero",
                });
            }
            for j in 0..n {
                let d = data[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(GraphError::InvalidDistance {
                        row: i,
                        col: j,
                        reason: "entries must be finite and non-negative",
                    });
                }
                if d != data[j * n + i] {
                    return Err(GraphError::InvalidDistance {
                        row: i,
                        col: j,
                        reason: "matrix must be symmetric",
                    });
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

pub fn distance_matrix(set: &ImageSet) -> DistanceMatrix {
    let vectors: Vec<&[f64]> = set.points().iter().map(|p| p.vector.as_slice()).collect();
    DistanceMatrix::from_vectors(&vectors).expect("image sets are nonempty with uniform dimension")
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
