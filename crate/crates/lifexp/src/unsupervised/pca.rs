//! Principal component analysis via the symmetric eigensolver.

use crate::error::{Error, Result};
use crate::numerics::{eig_symmetric, Matrix};

/// Fitted PCA basis.
#[derive(Debug, Clone)]
pub struct PcaModel {
    /// Column means of the training matrix.
    pub column_means: Vec<f64>,
    /// p×m matrix with orthonormal columns, the top-m covariance
    /// eigenvectors. Sign convention: each column's largest-magnitude entry
    /// is positive.
    pub components: Matrix,
    /// Top-m covariance eigenvalues, non-increasing, clamped at 0.
    pub explained_variance: Vec<f64>,
}

/// Fits a PCA of `m` components on the sample covariance (n − 1 divisor) of
/// the centered input.
pub fn pca_fit(x: &Matrix, m: usize) -> Result<PcaModel> {
    let n = x.n_rows();
    let p = x.n_cols();
    if n < 2 {
        return Err(Error::Contract("PCA needs at least two samples".into()));
    }
    if m > p {
        return Err(Error::Contract(format!(
            "cannot extract {m} components from {p} features"
        )));
    }

    let means: Vec<f64> = (0..p)
        .map(|j| x.column(j).iter().sum::<f64>() / n as f64)
        .collect();

    // Sample covariance of the centered data.
    let mut cov = Matrix::zeros(p, p);
    for i in 0..p {
        for j in i..p {
            let mut acc = 0.0;
            for r in 0..n {
                acc += (x.get(r, i) - means[i]) * (x.get(r, j) - means[j]);
            }
            let v = acc / (n - 1) as f64;
            cov.set(i, j, v);
            cov.set(j, i, v);
        }
    }

    let eig = eig_symmetric(&cov)?;
    let mut components = Matrix::zeros(p, m);
    let mut explained = Vec::with_capacity(m);
    for c in 0..m {
        explained.push(eig.eigenvalues[c].max(0.0));
        // Fix sign: the largest-magnitude entry of each component positive,
        // with ties going to the lowest row index.
        let mut best_row = 0;
        let mut best_mag = -1.0;
        for r in 0..p {
            let mag = eig.eigenvectors.get(r, c).abs();
            if mag > best_mag {
                best_mag = mag;
                best_row = r;
            }
        }
        let flip = if eig.eigenvectors.get(best_row, c) < 0.0 {
            -1.0
        } else {
            1.0
        };
        for r in 0..p {
            components.set(r, c, flip * eig.eigenvectors.get(r, c));
        }
    }

    Ok(PcaModel {
        column_means: means,
        components,
        explained_variance: explained,
    })
}

/// Projects rows onto the fitted components: (x − mean) · W.
pub fn pca_transform(model: &PcaModel, x: &Matrix) -> Result<Matrix> {
    let p = model.column_means.len();
    if x.n_cols() != p {
        return Err(Error::Shape(format!(
            "PCA fitted on {p} features, input has {}",
            x.n_cols()
        )));
    }
    let m = model.components.n_cols();
    let mut data = Vec::with_capacity(x.n_rows() * m);
    for r in 0..x.n_rows() {
        for c in 0..m {
            let mut acc = 0.0;
            for j in 0..p {
                acc += (x.get(r, j) - model.column_means[j]) * model.components.get(j, c);
            }
            data.push(acc);
        }
    }
    Ok(Matrix::from_vec_unchecked(x.n_rows(), m, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn line_explains_everything_with_one_component() {
        let mut rng = SplitMix64::new(6);
        let rows: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                let t = rng.next_f64() * 10.0;
                vec![t, 2.0 * t]
            })
            .collect();
        let x = Matrix::from_rows(&rows).unwrap();
        let model = pca_fit(&x, 2).unwrap();
        let total: f64 = model.explained_variance.iter().sum();
        assert!(model.explained_variance[0] / total >= 0.99999);
    }

    #[test]
    fn full_basis_reconstructs_centered_data() {
        let mut rng = SplitMix64::new(12);
        let data: Vec<f64> = (0..40 * 4).map(|_| rng.next_f64() * 3.0).collect();
        let x = Matrix::from_vec(40, 4, data).unwrap();
        let model = pca_fit(&x, 4).unwrap();
        let z = pca_transform(&model, &x).unwrap();
        // Reconstruct: centered ≈ z · Wᵀ.
        let wt = model.components.transpose();
        let recon = z.matmul(&wt).unwrap();
        for r in 0..x.n_rows() {
            for c in 0..x.n_cols() {
                let centered = x.get(r, c) - model.column_means[c];
                assert!(
                    (recon.get(r, c) - centered).abs() < 1e-9,
                    "({r},{c}): {} vs {centered}",
                    recon.get(r, c)
                );
            }
        }
    }

    // Independent eigensolver oracle: explained variance must equal the top
    // covariance eigenvalues computed directly.
    #[test]
    fn explained_variance_matches_direct_eigenvalues() {
        let mut rng = SplitMix64::new(44);
        let n = 60;
        let p = 5;
        let data: Vec<f64> = (0..n * p).map(|_| rng.next_f64() * 4.0 - 2.0).collect();
        let x = Matrix::from_vec(n, p, data).unwrap();
        let model = pca_fit(&x, 3).unwrap();

        let means: Vec<f64> = (0..p)
            .map(|j| x.column(j).iter().sum::<f64>() / n as f64)
            .collect();
        let mut cov = Matrix::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                let mut acc = 0.0;
                for r in 0..n {
                    acc += (x.get(r, i) - means[i]) * (x.get(r, j) - means[j]);
                }
                cov.set(i, j, acc / (n - 1) as f64);
            }
        }
        let eig = eig_symmetric(&cov).unwrap();
        for c in 0..3 {
            assert!(
                (model.explained_variance[c] - eig.eigenvalues[c]).abs() <= 1e-9,
                "component {c}"
            );
        }
    }

    #[test]
    fn components_are_orthonormal_and_variance_non_increasing() {
        let mut rng = SplitMix64::new(3);
        let data: Vec<f64> = (0..80 * 6).map(|_| rng.next_f64()).collect();
        let x = Matrix::from_vec(80, 6, data).unwrap();
        let model = pca_fit(&x, 4).unwrap();
        let wtw = model.components.transpose().matmul(&model.components).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((wtw.get(i, j) - expected).abs() < 1e-10);
            }
        }
        for w in model.explained_variance.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert!(model.explained_variance.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn sign_convention_largest_entry_positive() {
        let mut rng = SplitMix64::new(14);
        let data: Vec<f64> = (0..30 * 3).map(|_| rng.next_f64()).collect();
        let x = Matrix::from_vec(30, 3, data).unwrap();
        let model = pca_fit(&x, 3).unwrap();
        for c in 0..3 {
            let col: Vec<f64> = (0..3).map(|r| model.components.get(r, c)).collect();
            let max_mag = col.iter().cloned().fold(0.0_f64, |a, v| a.max(v.abs()));
            assert!(col.iter().any(|&v| v == max_mag), "column {c}: {col:?}");
        }
    }

    #[test]
    fn too_many_components_is_error() {
        let x = Matrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert!(pca_fit(&x, 3).is_err());
    }
}
