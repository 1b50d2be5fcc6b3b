//! Column scalers: Standard (z-score with population std), MinMax, MaxAbs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalerKind {
    Standard,
    MinMax,
    MaxAbs,
}

impl ScalerKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScalerKind::Standard => "standard",
            ScalerKind::MinMax => "min_max",
            ScalerKind::MaxAbs => "max_abs",
        }
    }
}

/// Fitted per-column scaling parameters.
#[derive(Debug, Clone)]
pub struct Scaler {
    kind: ScalerKind,
    /// (offset, denominator) per column; a zero denominator marks a column
    /// that the transform maps to 0.
    params: Vec<(f64, f64)>,
}

/// Fits scaling parameters column by column. Standard uses the population
/// standard deviation (n divisor).
pub fn fit_scaler(kind: ScalerKind, x: &Matrix) -> Result<Scaler> {
    if x.n_rows() == 0 {
        return Err(Error::Contract("cannot fit a scaler on an empty matrix".into()));
    }
    let n = x.n_rows() as f64;
    let params = (0..x.n_cols())
        .map(|j| {
            let col = x.column(j);
            match kind {
                ScalerKind::Standard => {
                    let mean = col.iter().sum::<f64>() / n;
                    let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                    (mean, var.sqrt())
                }
                ScalerKind::MinMax => {
                    let lo = col.iter().cloned().fold(f64::INFINITY, f64::min);
                    let hi = col.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    (lo, hi - lo)
                }
                ScalerKind::MaxAbs => {
                    let m = col.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
                    (0.0, m)
                }
            }
        })
        .collect();
    Ok(Scaler { kind, params })
}

impl Scaler {
    pub fn kind(&self) -> ScalerKind {
        self.kind
    }

    /// Applies the fitted parameters. The column count must match the fit.
    pub fn transform(&self, x: &Matrix) -> Result<Matrix> {
        if x.n_cols() != self.params.len() {
            return Err(Error::Shape(format!(
                "scaler fitted on {} columns, input has {}",
                self.params.len(),
                x.n_cols()
            )));
        }
        let mut data = Vec::with_capacity(x.n_rows() * x.n_cols());
        for r in 0..x.n_rows() {
            for (j, &(offset, denom)) in self.params.iter().enumerate() {
                if denom == 0.0 {
                    data.push(0.0);
                } else {
                    data.push((x.get(r, j) - offset) / denom);
                }
            }
        }
        Ok(Matrix::from_vec_unchecked(x.n_rows(), x.n_cols(), data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(values: &[f64]) -> Matrix {
        Matrix::from_vec(values.len(), 1, values.to_vec()).unwrap()
    }

    #[test]
    fn max_abs_example() {
        let x = col(&[-2.0, 4.0]);
        let s = fit_scaler(ScalerKind::MaxAbs, &x).unwrap();
        let t = s.transform(&x).unwrap();
        assert_eq!(t.data(), &[-0.5, 1.0]);
    }

    #[test]
    fn min_max_example() {
        let x = col(&[-2.0, 4.0]);
        let s = fit_scaler(ScalerKind::MinMax, &x).unwrap();
        let t = s.transform(&x).unwrap();
        assert_eq!(t.data(), &[0.0, 1.0]);
    }

    #[test]
    fn standard_gives_zero_mean_unit_variance() {
        let x = col(&[1.0, 3.0, 7.0, 2.0, 9.0]);
        let s = fit_scaler(ScalerKind::Standard, &x).unwrap();
        let t = s.transform(&x).unwrap();
        let n = t.n_rows() as f64;
        let mean: f64 = t.data().iter().sum::<f64>() / n;
        let var: f64 = t.data().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!(mean.abs() < 1e-10);
        assert!((var - 1.0).abs() < 1e-10);
    }

    #[test]
    fn max_abs_non_constant_column_peaks_at_one() {
        let x = col(&[0.25, -3.0, 1.5]);
        let s = fit_scaler(ScalerKind::MaxAbs, &x).unwrap();
        let t = s.transform(&x).unwrap();
        let peak = t.data().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        assert_eq!(peak, 1.0);
    }

    #[test]
    fn zero_spread_columns_map_to_zero() {
        let x = col(&[4.0, 4.0, 4.0]);
        for kind in [ScalerKind::Standard, ScalerKind::MinMax] {
            let s = fit_scaler(kind, &x).unwrap();
            let t = s.transform(&x).unwrap();
            assert!(t.data().iter().all(|&v| v == 0.0), "{kind:?}");
        }
        // All-zero column under MaxAbs also maps to zero.
        let z = col(&[0.0, 0.0]);
        let s = fit_scaler(ScalerKind::MaxAbs, &z).unwrap();
        assert!(s.transform(&z).unwrap().data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn transform_rejects_column_mismatch() {
        let x = Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let s = fit_scaler(ScalerKind::Standard, &x).unwrap();
        let y = col(&[1.0, 2.0]);
        assert!(matches!(s.transform(&y), Err(Error::Shape(_))));
    }
}
