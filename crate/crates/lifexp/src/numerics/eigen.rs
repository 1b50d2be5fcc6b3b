//! Symmetric eigendecomposition by cyclic Jacobi rotations.
//!
//! The matrices handled here are small (feature covariances, ~20×20 at most),
//! where Jacobi's simplicity and near-perfect orthogonality beat the speed of
//! QR iteration.

use super::Matrix;
use crate::error::{Error, Result};

/// Symmetry check tolerance, relative to the largest entry magnitude.
const SYMMETRY_TOL: f64 = 1e-12;
/// Convergence: off-diagonal Frobenius mass relative to the full norm.
const OFF_DIAG_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) with matching unit-norm eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// p×p matrix whose column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: Matrix,
}

/// Decomposes a symmetric matrix. Rejects non-symmetric input rather than
/// silently symmetrizing it.
pub fn eig_symmetric(s: &Matrix) -> Result<EigenDecomposition> {
    let p = s.n_rows();
    if p != s.n_cols() {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            s.n_rows(),
            s.n_cols()
        )));
    }
    let scale = s.data().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for i in 0..p {
        for j in (i + 1)..p {
            if (s.get(i, j) - s.get(j, i)).abs() > SYMMETRY_TOL * scale.max(1e-300) {
                return Err(Error::Contract(format!(
                    "matrix is not symmetric at ({i},{j}): {} vs {}",
                    s.get(i, j),
                    s.get(j, i)
                )));
            }
        }
    }
    if p == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![],
            eigenvectors: Matrix::zeros(0, 0),
        });
    }

    let mut a = s.clone();
    let mut v = Matrix::identity(p);
    let total_norm = s.frobenius_norm().max(1e-300);

    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = {
            let mut acc = 0.0;
            for i in 0..p {
                for j in (i + 1)..p {
                    acc += 2.0 * a.get(i, j).powi(2);
                }
            }
            acc.sqrt()
        };
        if off <= OFF_DIAG_TOL * total_norm {
            break;
        }

        for i in 0..p {
            for j in (i + 1)..p {
                let apq = a.get(i, j);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(i, i);
                let aqq = a.get(j, j);
                let theta = (aqq - app) / (2.0 * apq);
                // Stable tangent of the rotation angle.
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s_rot = t * c;

                for k in 0..p {
                    let aki = a.get(k, i);
                    let akj = a.get(k, j);
                    a.set(k, i, c * aki - s_rot * akj);
                    a.set(k, j, s_rot * aki + c * akj);
                }
                for k in 0..p {
                    let aik = a.get(i, k);
                    let ajk = a.get(j, k);
                    a.set(i, k, c * aik - s_rot * ajk);
                    a.set(j, k, s_rot * aik + c * ajk);
                }
                for k in 0..p {
                    let vki = v.get(k, i);
                    let vkj = v.get(k, j);
                    v.set(k, i, c * vki - s_rot * vkj);
                    v.set(k, j, s_rot * vki + c * vkj);
                }
            }
        }
    }

    // Final convergence check.
    let mut off = 0.0;
    for i in 0..p {
        for j in (i + 1)..p {
            off += 2.0 * a.get(i, j).powi(2);
        }
    }
    if off.sqrt() > OFF_DIAG_TOL * total_norm * 10.0 {
        return Err(Error::NoConvergence("Jacobi eigensolver"));
    }

    // Sort descending by eigenvalue, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&x, &y| a.get(y, y).partial_cmp(&a.get(x, x)).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k)).collect();
    let mut eigenvectors = Matrix::zeros(p, p);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..p {
            eigenvectors.set(r, new_col, v.get(r, old_col));
        }
    }

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
