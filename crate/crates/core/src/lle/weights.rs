use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::LleError;
use crate::graph::NeighborGraph;
use crate::imgseq::ImageSet;

/// Sparse reconstruction weights; row `i` maps each neighbor of point `i` to its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl WeightMatrix {
    /// Checks indices and that each row is nonempty and sums to one within `1e-10`.
    pub fn from_rows(n: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self, LleError> {
        if rows.len() != n {
            return Err(LleError::SizeMismatch {
                expected: n,
                actual: rows.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(LleError::NoNeighbors { point: i });
            }
            if row.iter().any(|&(j, w)| j >= n || !w.is_finite()) {
                return Err(LleError::NonFinite { point: i });
            }
            let sum: f64 = row.iter().map(|&(_, w)| w).sum();
            if (sum - 1.0).abs() > 1e-10 {
                return Err(LleError::RowSum { point: i, sum });
            }
        }
        Ok(Self { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].iter().find(|&&(k, _)| k == j).map_or(0.0, |&(_, w)| w)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                m[(i, j)] += w;
            }
        }
        m
    }
}

/// Sum-to-one weights that best reconstruct `target` from `neighbors`.
///
/// Solves `(G + reg * trace(G)/K * I) w = 1` with `G_jk = (x - x_j).(x - x_k)` and rescales
/// `w` to sum to one. A singular system falls back to the minimum-norm solution of the
/// bordered constraint system.
pub fn local_weights(target: &[f64], neighbors: &[&[f64]], reg: f64) -> Result<Vec<f64>, LleError> {
    let k = neighbors.len();
    if k == 0 {
        return Err(LleError::NoNeighbors { point: 0 });
    }
    if !(reg >= 0.0 && reg.is_finite()) {
        return Err(LleError::Regularization(reg));
    }
    let dim = target.len();
    if let Some(bad) = neighbors.iter().position(|v| v.len() != dim) {
        return Err(LleError::Dimension {
            expected: dim,
            actual: neighbors[bad].len(),
        });
    }
    if target.iter().chain(neighbors.iter().flat_map(|v| v.iter())).any(|v| !v.is_finite()) {
        return Err(LleError::NonFinite { point: 0 });
    }

    let diffs: Vec<Vec<f64>> = neighbors
        .iter()
        .map(|v| target.iter().zip(v.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let mut gram = DMatrix::<f64>::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let g: f64 = diffs[a].iter().zip(&diffs[b]).map(|(x, y)| x * y).sum();
            gram[(a, b)] = g;
            gram[(b, a)] = g;
        }
    }
    let trace = gram.trace();
    let shift = if trace > 0.0 { reg * trace / k as f64 } else { reg };
    for a in 0..k {
        gram[(a, a)] += shift;
    }

    let ones = DVector::from_element(k, 1.0);
    if let Some(chol) = gram.clone().cholesky() {
        let w = chol.solve(&ones);
        let sum = w.sum();
        if sum.is_finite() && sum.abs() > f64::EPSILON * w.amax() && w.iter().all(|v| v.is_finite()) {
            return Ok(w.iter().map(|v| v / sum).collect());
        }
    }
    Ok(bordered_solve(&gram))
}

/// Minimum-norm solution of `[[G, 1], [1^T, 0]] [w; l] = [0; 1]`.
fn bordered_solve(gram: &DMatrix<f64>) -> Vec<f64> {
    let k = gram.nrows();
    let mut kkt = DMatrix::<f64>::zeros(k + 1, k + 1);
    kkt.view_mut((0, 0), (k, k)).copy_from(gram);
    for a in 0..k {
        kkt[(a, k)] = 1.0;
        kkt[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let svd = kkt.svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let sol = svd.solve(&rhs, eps).expect("both singular vector sets were computed");
    let w: Vec<f64> = sol.iter().take(k).copied().collect();
    let sum: f64 = w.iter().sum();
    w.into_iter().map(|v| v / sum).collect()
}

/// Row `i` holds the local weights of point `i` against its graph neighbors.
pub fn weight_matrix(set: &ImageSet, graph: &NeighborGraph, reg: f64) -> Result<WeightMatrix, LleError> {
    if graph.n() != set.len() {
        return Err(LleError::SizeMismatch {
            expected: set.len(),
            actual: graph.n(),
        });
    }
    let rows = (0..set.len())
        .into_par_iter()
        .map(|i| {
            let idx = graph.neighbor_indices(i);
            let vecs: Vec<&[f64]> = idx.iter().map(|&j| set.vector(j)).collect();
            let w = local_weights(set.vector(i), &vecs, reg).map_err(|e| e.at_point(i))?;
            Ok(idx.into_iter().zip(w).collect())
        })
        .collect::<Result<Vec<Vec<(usize, f64)>>, LleError>>()?;
    Ok(WeightMatrix { n: set.len(), rows })
}
