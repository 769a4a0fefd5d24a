use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};

use super::FrontalError;
use crate::lle::Embedding;

/// Rotates a 2-D embedding so the curve opens upward along axis 2.
///
/// Candidate orientations are the principal axes of a least-squares conic through the
/// centered points and the covariance principal axes; the one whose axis 2 is best explained
/// as a quadratic in axis 1 wins. Axis 1 is then signed so its largest-magnitude entry is
/// positive, and axis 2 so that the most extreme fifth of the points along axis 1 sit above
/// the rest on average.
pub fn canonicalize(emb: &Embedding) -> Result<Embedding, FrontalError> {
    if emb.dim() != 2 {
        return Err(FrontalError::Dimension(emb.dim()));
    }
    let n = emb.n();
    if n < 4 {
        return Err(FrontalError::TooFewPoints(n));
    }
    let (mx, my) = (mean(&emb.column(0)), mean(&emb.column(1)));
    let pts: Vec<[f64; 2]> = (0..n).map(|i| [emb.get(i, 0) - mx, emb.get(i, 1) - my]).collect();

    let mut cov = Matrix2::zeros();
    for p in &pts {
        cov[(0, 0)] += p[0] * p[0];
        cov[(0, 1)] += p[0] * p[1];
        cov[(1, 1)] += p[1] * p[1];
    }
    cov[(1, 0)] = cov[(0, 1)];
    cov /= n as f64;
    let pca = SymmetricEigen::new(cov);
    let (lo, hi) = if pca.eigenvalues[0] <= pca.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let (minor, major) = (pca.eigenvalues[lo], pca.eigenvalues[hi]);
    if major.is_nan() || major <= 0.0 || minor < 1e-12 * major {
        return Err(FrontalError::Degenerate { minor, major });
    }

    let conic = conic_axis(&pts);
    let mut candidates = vec![conic, conic + std::f64::consts::FRAC_PI_2];
    for k in [hi, lo] {
        let v = pca.eigenvectors.column(k);
        candidates.push(v[1].atan2(v[0]));
    }

    let mut best: Option<(f64, Vec<[f64; 2]>)> = None;
    for theta in candidates {
        let z = rotate(&pts, theta);
        let r = quadratic_fit(&z).map_or(f64::INFINITY, |f| f.residual);
        let better = match &best {
            None => true,
            Some((b, _)) => r < b - 1e-12 * b.abs().max(1.0),
        };
        if better {
            best = Some((r, z));
        }
    }
    let mut z = best.expect("at least one candidate").1;

    let peak = z.iter().map(|p| p[0].abs()).fold(0.0, f64::max);
    let pivot = z.iter().position(|p| p[0].abs() >= peak * (1.0 - 1e-9)).unwrap_or(0);
    if z[pivot][0] < 0.0 {
        z.iter_mut().for_each(|p| p[0] = -p[0]);
    }

    let m = ((0.2 * n as f64).ceil() as usize).clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| z[b][0].abs().total_cmp(&z[a][0].abs()).then(a.cmp(&b)));
    let ext = order[..m].iter().map(|&i| z[i][1]).sum::<f64>() / m as f64;
    let rest = order[m..].iter().map(|&i| z[i][1]).sum::<f64>() / (n - m) as f64;
    if ext < rest {
        z.iter_mut().for_each(|p| p[1] = -p[1]);
    }

    let coords = DMatrix::from_fn(n, 2, |i, c| z[i][c]);
    Ok(Embedding::new(coords, emb.eigenvalues().to_vec()).expect("finite rotated coordinates"))
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Axis 1 points along angle `theta`.
fn rotate(pts: &[[f64; 2]], theta: f64) -> Vec<[f64; 2]> {
    let (s, c) = theta.sin_cos();
    pts.iter().map(|p| [c * p[0] + s * p[1], -s * p[0] + c * p[1]]).collect()
}

/// Orientation of the principal axes of the algebraic least-squares conic.
fn conic_axis(pts: &[[f64; 2]]) -> f64 {
    let rms = (pts.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum::<f64>() / pts.len() as f64).sqrt();
    let mut ata = DMatrix::<f64>::zeros(6, 6);
    for p in pts {
        let (x, y) = (p[0] / rms, p[1] / rms);
        let row = [x * x, x * y, y * y, x, y, 1.0];
        for a in 0..6 {
            for b in 0..6 {
                ata[(a, b)] += row[a] * row[b];
            }
        }
    }
    let eig = SymmetricEigen::new(ata);
    let k = eig.eigenvalues.imin();
    let v = eig.eigenvectors.column(k);
    0.5 * v[1].atan2(v[0] - v[2])
}

/// Least-squares `y = a x^2 + b x + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual: f64,
}

pub fn quadratic_fit(pts: &[[f64; 2]]) -> Option<QuadraticFit> {
    let n = pts.len();
    let design = DMatrix::from_fn(n, 3, |i, c| match c {
        0 => pts[i][0] * pts[i][0],
        1 => pts[i][0],
        _ => 1.0,
    });
    let y = DVector::from_iterator(n, pts.iter().map(|p| p[1]));
    let svd = design.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let coef = svd.solve(&y, eps).ok()?;
    let residual = (&design * &coef - &y).norm_squared();
    Some(QuadraticFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        residual,
    })
}
