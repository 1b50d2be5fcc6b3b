//! Least-squares solving via Householder QR with column pivoting.

use super::Matrix;
use crate::error::{Error, Result};

/// Relative pivot tolerance for rank detection: a pivot counts as zero when
/// its magnitude falls at or below `RANK_TOL` times the largest pivot.
const RANK_TOL: f64 = 1e-10;

/// Householder factorization state. `work`'s upper triangle holds R; the
/// rhs has Qᵀ applied in place.
struct Factored {
    work: Matrix,
    rhs: Vec<f64>,
    perm: Vec<usize>,
    rank: usize,
}

/// Pivoted Householder QR applied to `a` and `b` together. Stops early at
/// the detected numerical rank.
fn factorize(a: &Matrix, b: &[f64]) -> Factored {
    let n = a.n_rows();
    let p = a.n_cols();
    let mut work = a.clone();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut col_norms: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|i| work.get(i, j).powi(2)).sum())
        .collect();

    let mut first_pivot = 0.0_f64;
    let mut rank = p.min(n);

    for k in 0..p.min(n) {
        // Pivot: bring the column with the largest remaining norm to k.
        let (best, _) = col_norms
            .iter()
            .enumerate()
            .skip(k)
            .fold((k, -1.0), |(bi, bv), (j, &v)| if v > bv { (j, v) } else { (bi, bv) });
        if best != k {
            for i in 0..n {
                let tmp = work.get(i, k);
                work.set(i, k, work.get(i, best));
                work.set(i, best, tmp);
            }
            col_norms.swap(k, best);
            perm.swap(k, best);
        }

        let norm_x: f64 = (k..n).map(|i| work.get(i, k).powi(2)).sum::<f64>().sqrt();
        if k == 0 {
            first_pivot = norm_x;
        }
        if norm_x <= RANK_TOL * first_pivot {
            rank = k;
            break;
        }

        // Householder reflector annihilating column k below the diagonal,
        // applied to the remaining columns and the rhs.
        let alpha = if work.get(k, k) >= 0.0 { -norm_x } else { norm_x };
        let mut v: Vec<f64> = (k..n).map(|i| work.get(i, k)).collect();
        v[0] -= alpha;
        let v_norm_sq: f64 = v.iter().map(|x| x * x).sum();
        if v_norm_sq > 0.0 {
            for j in k..p {
                let dot: f64 = (k..n).map(|i| v[i - k] * work.get(i, j)).sum();
                let scale = 2.0 * dot / v_norm_sq;
                for i in k..n {
                    let val = work.get(i, j) - scale * v[i - k];
                    work.set(i, j, val);
                }
            }
            let dot: f64 = (k..n).map(|i| v[i - k] * rhs[i]).sum();
            let scale = 2.0 * dot / v_norm_sq;
            for i in k..n {
                rhs[i] -= scale * v[i - k];
            }
        }
        work.set(k, k, alpha);
        for i in (k + 1)..n {
            work.set(i, k, 0.0);
        }
        for j in (k + 1)..p {
            col_norms[j] = ((k + 1)..n).map(|i| work.get(i, j).powi(2)).sum();
        }
    }

    Factored {
        work,
        rhs,
        perm,
        rank,
    }
}

/// The result of a pivoted-QR least-squares solve.
///
/// Keeps the triangular factor and the column permutation so callers that
/// need `(AᵀA)⁻¹` diagnostics (coefficient standard errors) can derive them
/// without refactoring the system.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    /// Minimizer of ‖Ax − b‖₂.
    pub solution: Vec<f64>,
    /// Numerical rank detected during factorization.
    pub rank: usize,
    /// Upper-triangular factor R (p×p), in pivoted column order.
    r: Matrix,
    /// Column permutation: original column `perm[j]` sits at pivot position `j`.
    perm: Vec<usize>,
}

impl LeastSquares {
    /// Factorizes `a` (n×p, n ≥ p) and solves against `b`, reporting rank
    /// deficiency instead of producing a garbage solution.
    pub fn solve(a: &Matrix, b: &[f64]) -> Result<LeastSquares> {
        let n = a.n_rows();
        let p = a.n_cols();
        if b.len() != n {
            return Err(Error::Shape(format!(
                "rhs length {} does not match {} rows",
                b.len(),
                n
            )));
        }
        if n < p {
            return Err(Error::Contract(format!(
                "least squares needs n >= p, got n={n}, p={p}"
            )));
        }
        if p == 0 {
            return Ok(LeastSquares {
                solution: vec![],
                rank: 0,
                r: Matrix::zeros(0, 0),
                perm: vec![],
            });
        }

        let f = factorize(a, b);
        if f.rank < p {
            return Err(Error::RankDeficient {
                rank: f.rank,
                n_cols: p,
            });
        }

        // Back substitution: R z = Qᵀb (top p entries), then undo pivoting.
        let mut z = vec![0.0; p];
        for i in (0..p).rev() {
            let mut acc = f.rhs[i];
            for j in (i + 1)..p {
                acc -= f.work.get(i, j) * z[j];
            }
            z[i] = acc / f.work.get(i, i);
        }
        let mut solution = vec![0.0; p];
        for (pos, &orig) in f.perm.iter().enumerate() {
            solution[orig] = z[pos];
        }

        let mut r = Matrix::zeros(p, p);
        for i in 0..p {
            for j in i..p {
                r.set(i, j, f.work.get(i, j));
            }
        }

        Ok(LeastSquares {
            solution,
            rank: f.rank,
            r,
            perm: f.perm,
        })
    }

    /// Diagonal of `(AᵀA)⁻¹` in the original column order, derived from the
    /// triangular factor: AᵀA = P RᵀR Pᵀ, so the diagonal entries are the
    /// squared row norms of R⁻¹ routed through the permutation.
    pub fn xtx_inverse_diag(&self) -> Vec<f64> {
        let p = self.perm.len();
        // Invert R by back substitution, one unit vector at a time.
        let mut rinv = Matrix::zeros(p, p);
        for col in 0..p {
            let mut x = vec![0.0; p];
            for i in (0..=col).rev() {
                let mut acc = if i == col { 1.0 } else { 0.0 };
                for j in (i + 1)..=col {
                    acc -= self.r.get(i, j) * x[j];
                }
                x[i] = acc / self.r.get(i, i);
            }
            for i in 0..=col {
                rinv.set(i, col, x[i]);
            }
        }
        let mut diag = vec![0.0; p];
        for (pos, &orig) in self.perm.iter().enumerate() {
            diag[orig] = (pos..p).map(|j| rinv.get(pos, j).powi(2)).sum();
        }
        diag
    }
}

/// Minimizes ‖Ax − b‖₂ for full-column-rank `A`.
pub fn solve_least_squares(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    Ok(LeastSquares::solve(a, b)?.solution)
}

/// Numerical rank of `a` plus the original indices of the columns pivoted
/// out as dependent. Empty second component means full rank.
pub(crate) fn rank_analysis(a: &Matrix) -> (usize, Vec<usize>) {
    let zeros = vec![0.0; a.n_rows()];
    let f = factorize(a, &zeros);
    (f.rank, f.perm[f.rank..].to_vec())
}
