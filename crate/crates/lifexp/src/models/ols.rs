//! Ordinary least squares with coefficient inference (standard errors,
//! t statistics, two-sided p-values).

use crate::error::{Error, Result};
use crate::numerics::{rank_analysis, student_t_two_sided_p, LeastSquares, Matrix};
use crate::tabular::Dataset;

/// A fitted linear model. The intercept is coefficient 0 and appears as
/// `"intercept"` in `feature_names`.
#[derive(Debug, Clone)]
pub struct OlsModel {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    pub t_stats: Vec<f64>,
    pub p_values: Vec<f64>,
    pub residual_variance: f64,
    pub dof: usize,
    pub feature_names: Vec<String>,
    /// Indicator columns removed before fitting because they complement
    /// another indicator into the intercept.
    pub dropped_collinear: Vec<String>,
    /// Original feature indices actually used, in design-matrix order.
    kept: Vec<usize>,
}

/// Fits y on an intercept plus every feature, via pivoted QR.
///
/// Complementary 0/1 indicator pairs (columns summing to the ones vector,
/// as one-hot encoding of a two-level factor produces) would make the
/// design exactly singular; the later column of each such pair is dropped
/// and reported in `dropped_collinear` before fitting.
pub fn ols_fit(train: &Dataset) -> Result<OlsModel> {
    let n = train.n_samples();
    let p = train.n_features();

    let kept = drop_complementary_indicators(&train.features);
    let dropped_collinear: Vec<String> = (0..p)
        .filter(|j| !kept.contains(j))
        .map(|j| train.feature_names[j].clone())
        .collect();
    let n_coef = kept.len() + 1;
    if n <= n_coef {
        return Err(Error::Contract(format!(
            "OLS needs n > p + 1, got n={n} with {} predictors",
            kept.len()
        )));
    }

    // Design matrix with a leading ones column.
    let mut data = Vec::with_capacity(n * n_coef);
    for r in 0..n {
        data.push(1.0);
        for &j in &kept {
            data.push(train.features.get(r, j));
        }
    }
    let design = Matrix::from_vec_unchecked(n, n_coef, data);

    let ls = match LeastSquares::solve(&design, &train.target) {
        Ok(ls) => ls,
        Err(Error::RankDeficient { .. }) => {
            let (_, dependent) = rank_analysis(&design);
            let columns = dependent
                .iter()
                .map(|&c| {
                    if c == 0 {
                        "intercept".to_string()
                    } else {
                        train.feature_names[kept[c - 1]].clone()
                    }
                })
                .collect();
            return Err(Error::Collinear { columns });
        }
        Err(e) => return Err(e),
    };

    let coefficients = ls.solution.clone();
    let fitted = design.matvec(&coefficients)?;
    let rss: f64 = fitted
        .iter()
        .zip(&train.target)
        .map(|(f, y)| (f - y).powi(2))
        .sum();
    let dof = n - n_coef;
    let residual_variance = rss / dof as f64;

    let diag = ls.xtx_inverse_diag();
    let mut standard_errors = Vec::with_capacity(n_coef);
    let mut t_stats = Vec::with_capacity(n_coef);
    let mut p_values = Vec::with_capacity(n_coef);
    for j in 0..n_coef {
        let se = (residual_variance * diag[j].max(0.0)).sqrt();
        standard_errors.push(se);
        if se > 0.0 {
            let t = coefficients[j] / se;
            t_stats.push(t);
            p_values.push(student_t_two_sided_p(t, dof)?);
        } else {
            // Degenerate perfect fit: no usable sampling distribution.
            t_stats.push(0.0);
            p_values.push(1.0);
        }
    }

    let mut feature_names = Vec::with_capacity(n_coef);
    feature_names.push("intercept".to_string());
    for &j in &kept {
        feature_names.push(train.feature_names[j].clone());
    }

    Ok(OlsModel {
        coefficients,
        standard_errors,
        t_stats,
        p_values,
        residual_variance,
        dof,
        feature_names,
        dropped_collinear,
        kept,
    })
}

/// Finds exact complementary 0/1 indicator pairs and keeps only the first
/// column of each pair. Returns the kept original indices, in order.
fn drop_complementary_indicators(features: &Matrix) -> Vec<usize> {
    let p = features.n_cols();
    let n = features.n_rows();
    let is_binary: Vec<bool> = (0..p)
        .map(|j| (0..n).all(|r| features.get(r, j) == 0.0 || features.get(r, j) == 1.0))
        .collect();
    let mut dropped = vec![false; p];
    for i in 0..p {
        if !is_binary[i] || dropped[i] {
            continue;
        }
        for j in (i + 1)..p {
            if !is_binary[j] || dropped[j] {
                continue;
            }
            if (0..n).all(|r| features.get(r, i) + features.get(r, j) == 1.0) {
                dropped[j] = true;
            }
        }
    }
    (0..p).filter(|&j| !dropped[j]).collect()
}

/// Predicts with the fitted coefficients; expects the original (pre-drop)
/// feature layout.
pub fn ols_predict(model: &OlsModel, x: &Matrix) -> Result<Vec<f64>> {
    let needed = model.kept.iter().copied().max().map_or(0, |m| m + 1);
    if x.n_cols() < needed {
        return Err(Error::Shape(format!(
            "model uses feature index {} but input has {} columns",
            needed - 1,
            x.n_cols()
        )));
    }
    Ok((0..x.n_rows())
        .map(|r| {
            let mut acc = model.coefficients[0];
            for (pos, &j) in model.kept.iter().enumerate() {
                acc += model.coefficients[pos + 1] * x.get(r, j);
            }
            acc
        })
        .collect())
}

/// Non-intercept features with p < alpha, ordered by ascending p-value.
pub fn ols_significant_features(model: &OlsModel, alpha: f64) -> Vec<String> {
    let mut rows: Vec<(f64, usize)> = model
        .p_values
        .iter()
        .enumerate()
        .skip(1) // intercept excluded
        .filter(|&(_, &p)| p < alpha)
        .map(|(i, &p)| (p, i))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    rows.into_iter()
        .map(|(_, i)| model.feature_names[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn dataset(xs: Vec<Vec<f64>>, ys: Vec<f64>, names: Vec<&str>) -> Dataset {
        Dataset {
            features: Matrix::from_rows(&xs).unwrap(),
            target: ys,
            feature_names: names.into_iter().map(String::from).collect(),
        }
    }

    #[test]
    fn exact_line_recovered() {
        // y = 2x + 1, noiseless.
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let ys: Vec<f64> = (0..10).map(|i| 2.0 * i as f64 + 1.0).collect();
        let d = dataset(xs, ys, vec!["x"]);
        let m = ols_fit(&d).unwrap();
        assert!((m.coefficients[0] - 1.0).abs() < 1e-10);
        assert!((m.coefficients[1] - 2.0).abs() < 1e-10);
        assert!(m.residual_variance < 1e-18);

        let pred = ols_predict(&m, &d.features).unwrap();
        let ss_res: f64 = pred
            .iter()
            .zip(&d.target)
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        assert!(ss_res < 1e-16, "training R^2 = 1 on an exact fit");
    }

    #[test]
    fn orthogonal_noise_feature_insignificant() {
        // Feature 1 is exactly orthogonal to y and to feature 0, so its
        // coefficient is 0 analytically: t = 0, p = 1.
        let xs = vec![
            vec![1.0, 1.0],
            vec![2.0, -1.0],
            vec![3.0, -1.0],
            vec![4.0, 1.0],
            vec![5.0, 1.0],
            vec![6.0, -1.0],
            vec![7.0, -1.0],
            vec![8.0, 1.0],
        ];
        let ys = vec![1.0, 2.0, 3.0, 4.0, 4.0, 3.0, 2.0, 1.0];
        // cross-checks: Σ x1 = 0, Σ x1·y = 1+(-2)+(-3)+4+4+(-3)+(-2)+1 = 0,
        // Σ x1·x0 = 1-2-3+4+5-6-7+8 = 0.
        let d = dataset(xs, ys, vec!["x0", "x1"]);
        let m = ols_fit(&d).unwrap();
        assert!(m.coefficients[2].abs() < 1e-12);
        assert!(m.t_stats[2].abs() < 1e-9);
        assert!(m.p_values[2] > 1.0 - 1e-9);
    }

    // Independent oracle: normal equations solved by Gauss–Jordan plus the
    // closed-form standard errors; p-values from the shared t tail.
    #[test]
    fn matches_normal_equations_oracle() {
        let mut rng = SplitMix64::new(404);
        for trial in 0..20 {
            let n = 25 + rng.next_index(30);
            let p = 2 + rng.next_index(3);
            let xs: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..p).map(|_| rng.next_f64() * 4.0 - 2.0).collect())
                .collect();
            let beta_true: Vec<f64> = (0..=p).map(|_| rng.next_f64() * 3.0 - 1.5).collect();
            let ys: Vec<f64> = xs
                .iter()
                .map(|row| {
                    beta_true[0]
                        + row
                            .iter()
                            .zip(&beta_true[1..])
                            .map(|(x, b)| x * b)
                            .sum::<f64>()
                        + (rng.next_f64() - 0.5)
                })
                .collect();
            let names: Vec<String> = (0..p).map(|i| format!("x{i}")).collect();
            let d = Dataset {
                features: Matrix::from_rows(&xs).unwrap(),
                target: ys.clone(),
                feature_names: names,
            };
            let m = ols_fit(&d).unwrap();

            // Oracle path: X'X beta = X'y via Gauss-Jordan on the full inverse.
            let mut design_rows = Vec::with_capacity(n);
            for row in &xs {
                let mut r = vec![1.0];
                r.extend_from_slice(row);
                design_rows.push(r);
            }
            let design = Matrix::from_rows(&design_rows).unwrap();
            let xtx = design.transpose().matmul(&design).unwrap();
            let inv = invert(&xtx);
            let xty = design.transpose().matvec(&ys).unwrap();
            let beta_ne = inv.matvec(&xty).unwrap();
            let fitted = design.matvec(&beta_ne).unwrap();
            let rss: f64 = fitted.iter().zip(&ys).map(|(a, b)| (a - b).powi(2)).sum();
            let dof = n - p - 1;
            let sigma2 = rss / dof as f64;

            for j in 0..=p {
                let rel = (m.coefficients[j] - beta_ne[j]).abs()
                    / beta_ne[j].abs().max(1e-8);
                assert!(rel < 1e-8, "trial {trial} coef {j}");
                let se_ne = (sigma2 * inv.get(j, j)).sqrt();
                let rel = (m.standard_errors[j] - se_ne).abs() / se_ne.max(1e-12);
                assert!(rel < 1e-8, "trial {trial} se {j}");
                let p_ne =
                    student_t_two_sided_p(beta_ne[j] / se_ne, dof).unwrap();
                let rel = (m.p_values[j] - p_ne).abs() / p_ne.max(1e-12);
                assert!(rel < 1e-8, "trial {trial} p {j}");
            }
        }
    }

    #[test]
    fn complementary_indicators_dropped_second() {
        let xs = vec![
            vec![1.0, 0.0, 2.5],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 4.0],
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 0.5],
            vec![0.0, 1.0, 2.0],
        ];
        let ys = vec![3.0, 1.0, 5.0, 2.0, 2.0, 1.5];
        let d = dataset(xs, ys, vec!["status_developing", "status_developed", "x"]);
        let m = ols_fit(&d).unwrap();
        assert_eq!(m.dropped_collinear, vec!["status_developed".to_string()]);
        assert_eq!(
            m.feature_names,
            vec!["intercept", "status_developing", "x"]
        );
    }

    #[test]
    fn duplicated_column_reported_collinear() {
        let xs: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let v = i as f64 * 0.7 + 1.0;
                vec![v, v]
            })
            .collect();
        let ys: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let d = dataset(xs, ys, vec!["a", "a_copy"]);
        match ols_fit(&d) {
            Err(Error::Collinear { columns }) => {
                assert!(!columns.is_empty());
                assert!(columns.iter().all(|c| c == "a" || c == "a_copy"));
            }
            other => panic!("expected collinear error, got {other:?}"),
        }
    }

    #[test]
    fn residuals_sum_to_zero_with_intercept() {
        let mut rng = SplitMix64::new(88);
        let xs: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.next_f64() * 10.0, rng.next_f64() * 3.0])
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|r| 3.0 + r[0] - 2.0 * r[1] + rng.next_f64())
            .collect();
        let d = dataset(xs, ys, vec!["a", "b"]);
        let m = ols_fit(&d).unwrap();
        let pred = ols_predict(&m, &d.features).unwrap();
        let resid_sum: f64 = pred.iter().zip(&d.target).map(|(f, y)| y - f).sum();
        let y_max = d.target.iter().cloned().fold(0.0_f64, |a, v| a.max(v.abs()));
        assert!(resid_sum.abs() <= 1e-8 * 40.0 * y_max);
    }

    #[test]
    fn predictions_invariant_under_feature_rescaling() {
        let mut rng = SplitMix64::new(21);
        let xs: Vec<Vec<f64>> = (0..30)
            .map(|_| vec![rng.next_f64() * 5.0, rng.next_f64()])
            .collect();
        let ys: Vec<f64> = xs.iter().map(|r| 1.0 + 2.0 * r[0] - r[1] + rng.next_f64() * 0.1).collect();
        let d = dataset(xs.clone(), ys.clone(), vec!["a", "b"]);
        let m = ols_fit(&d).unwrap();
        let base = ols_predict(&m, &d.features).unwrap();

        // Affine rescale of column 0: x -> 10x + 3.
        let xs2: Vec<Vec<f64>> = xs.iter().map(|r| vec![10.0 * r[0] + 3.0, r[1]]).collect();
        let d2 = dataset(xs2, ys, vec!["a", "b"]);
        let m2 = ols_fit(&d2).unwrap();
        let scaled = ols_predict(&m2, &d2.features).unwrap();
        for (u, v) in base.iter().zip(&scaled) {
            assert!((u - v).abs() < 1e-8, "{u} vs {v}");
        }
    }

    #[test]
    fn significant_features_sorted_by_p() {
        let m = OlsModel {
            coefficients: vec![0.0; 4],
            standard_errors: vec![1.0; 4],
            t_stats: vec![0.0; 4],
            p_values: vec![0.5, 0.04, 0.001, 0.9],
            residual_variance: 1.0,
            dof: 10,
            feature_names: vec![
                "intercept".into(),
                "a".into(),
                "b".into(),
                "c".into(),
            ],
            dropped_collinear: vec![],
            kept: vec![0, 1, 2],
        };
        assert_eq!(ols_significant_features(&m, 0.05), vec!["b", "a"]);
        assert_eq!(
            ols_significant_features(&m, 1.0 + 1e-9),
            vec!["b", "a", "c"]
        );
        assert!(ols_significant_features(&m, 0.0005).is_empty());
    }

    fn invert(m: &Matrix) -> Matrix {
        let n = m.n_rows();
        let mut a = m.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&i, &j| {
                    a.get(i, col).abs().partial_cmp(&a.get(j, col).abs()).unwrap()
                })
                .unwrap();
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(pivot_row, j));
                a.set(pivot_row, j, tmp);
                let tmp = inv.get(col, j);
                inv.set(col, j, inv.get(pivot_row, j));
                inv.set(pivot_row, j, tmp);
            }
            let pivot = a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) / pivot);
                inv.set(col, j, inv.get(col, j) / pivot);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let factor = a.get(i, col);
                for j in 0..n {
                    let v = a.get(i, j) - factor * a.get(col, j);
                    a.set(i, j, v);
                    let v = inv.get(i, j) - factor * inv.get(col, j);
                    inv.set(i, j, v);
                }
            }
        }
        inv
    }
}
