use nalgebra::DMatrix;

use super::{LleError, WeightMatrix};

/// Eigenvalues at or below this fraction of the largest one count as null.
pub const NULL_TOL: f64 = 1e-9;

/// Low-dimensional coordinates, one row per point, plus the retained eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    coords: DMatrix<f64>,
    eigenvalues: Vec<f64>,
}

impl Embedding {
    pub fn new(coords: DMatrix<f64>, eigenvalues: Vec<f64>) -> Result<Self, LleError> {
        if coords.ncols() == 0 || coords.nrows() == 0 {
            return Err(LleError::DimOutOfRange {
                d: coords.ncols(),
                n: coords.nrows(),
            });
        }
        if !eigenvalues.is_empty() && eigenvalues.len() != coords.ncols() {
            return Err(LleError::SizeMismatch {
                expected: coords.ncols(),
                actual: eigenvalues.len(),
            });
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(LleError::NonFinite { point: 0 });
        }
        Ok(Self { coords, eigenvalues })
    }

    pub fn n(&self) -> usize {
        self.coords.nrows()
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    pub fn get(&self, i: usize, c: usize) -> f64 {
        self.coords[(i, c)]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.coords.row(i).iter().copied().collect()
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.coords.column(c).iter().copied().collect()
    }

    /// Retained eigenvalues in ascending order; empty when the embedding was not produced
    /// by a spectral solve.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// `M = (I - W)^T (I - W)`.
pub fn cost_matrix(w: &WeightMatrix) -> DMatrix<f64> {
    let a = DMatrix::identity(w.n(), w.n()) - w.to_dense();
    a.transpose() * a
}

/// Bottom non-null eigenvectors of the cost matrix as embedding coordinates.
///
/// The eigenpairs come from the SVD of `I - W` (squared singular values, right singular
/// vectors), which keeps small eigenvalues accurate to working precision instead of
/// `eps * |M|`. Columns are unit eigenvectors scaled by `sqrt(n)`, ordered by ascending
/// eigenvalue, and sign-normalized so the entry of largest magnitude is positive.
pub fn embed(w: &WeightMatrix, d: usize) -> Result<Embedding, LleError> {
    let n = w.n();
    if d < 1 || d + 2 > n {
        return Err(LleError::DimOutOfRange { d, n });
    }
    let a = DMatrix::identity(n, n) - w.to_dense();
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let values: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[x].total_cmp(&values[y]).then(x.cmp(&y)));
    let top = values[order[n - 1]];
    let tol = NULL_TOL * top.max(0.0);
    let kept: Vec<usize> = order.into_iter().filter(|&k| values[k] > tol).take(d).collect();
    if kept.len() < d {
        return Err(LleError::RankDeficient {
            requested: d,
            usable: kept.len(),
        });
    }
    let scale = (n as f64).sqrt();
    let mut coords = DMatrix::zeros(n, d);
    for (c, &k) in kept.iter().enumerate() {
        let v = v_t.row(k).transpose();
        let norm = v.norm();
        let mut pivot = 0;
        for i in 1..n {
            if v[i].abs() > v[pivot].abs() {
                pivot = i;
            }
        }
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            coords[(i, c)] = sign * scale * v[i] / norm;
        }
    }
    let eigenvalues = kept.iter().map(|&k| values[k]).collect();
    Ok(Embedding { coords, eigenvalues })
}
