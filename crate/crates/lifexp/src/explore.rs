//! Descriptive statistics: histograms, Pearson correlation, and one-way
//! ANOVA.

use crate::error::{Error, Result};
use crate::numerics::{f_survival_p, Matrix};
use crate::tabular::Dataset;

/// Equal-width histogram. The last bin is closed on the right; all others
/// are half-open `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Bins `values` into `n_bins` equal-width bins spanning `[min, max]`.
/// A degenerate range (all values equal) is widened by ±0.5 so constant
/// columns still produce a drawable histogram.
pub fn histogram(values: &[f64], n_bins: usize) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::Contract("histogram needs at least one value".into()));
    }
    if n_bins == 0 {
        return Err(Error::Contract("histogram needs at least one bin".into()));
    }
    let mut lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / n_bins as f64;
    let bin_edges: Vec<f64> = (0..=n_bins)
        .map(|i| if i == n_bins { hi } else { lo + i as f64 * width })
        .collect();
    let mut counts = vec![0usize; n_bins];
    for &v in values {
        let raw = ((v - lo) / (hi - lo) * n_bins as f64).floor() as isize;
        let idx = raw.clamp(0, n_bins as isize - 1) as usize;
        counts[idx] += 1;
    }
    Ok(Histogram { bin_edges, counts })
}

/// Sample Pearson correlation coefficient. Both inputs need at least two
/// values and nonzero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Shape(format!(
            "pearson needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Contract("pearson needs at least two samples".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Contract(
            "pearson undefined for zero-variance input".into(),
        ));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Symmetric correlation matrix with unit diagonal. Zero-variance columns
/// are reported in `zero_variance` and get 0 off-diagonal entries.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub names: Vec<String>,
    pub r: Matrix,
    pub zero_variance: Vec<String>,
}

/// Pairwise Pearson over all features, plus the target as a final row and
/// column when `include_target` is set.
pub fn correlation_matrix(dataset: &Dataset, include_target: bool) -> Result<CorrelationMatrix> {
    if dataset.n_samples() < 2 {
        return Err(Error::Contract(
            "correlation matrix needs at least two samples".into(),
        ));
    }
    let mut series: Vec<(String, Vec<f64>)> = (0..dataset.n_features())
        .map(|j| (dataset.feature_names[j].clone(), dataset.features.column(j)))
        .collect();
    if include_target {
        series.push(("target".to_string(), dataset.target.clone()));
    }

    let variance_ok: Vec<bool> = series
        .iter()
        .map(|(_, v)| {
            let n = v.len() as f64;
            let m = v.iter().sum::<f64>() / n;
            v.iter().map(|x| (x - m).powi(2)).sum::<f64>() > 0.0
        })
        .collect();

    let k = series.len();
    let mut r = Matrix::zeros(k, k);
    for i in 0..k {
        r.set(i, i, 1.0);
        for j in (i + 1)..k {
            let value = if variance_ok[i] && variance_ok[j] {
                pearson(&series[i].1, &series[j].1)?
            } else {
                0.0
            };
            r.set(i, j, value);
            r.set(j, i, value);
        }
    }

    Ok(CorrelationMatrix {
        names: series.into_iter().map(|(n, _)| n).collect(),
        zero_variance: variance_ok
            .iter()
            .enumerate()
            .filter(|&(_, ok)| !ok)
            .map(|(i, _)| {
                if include_target && i == k - 1 {
                    "target".to_string()
                } else {
                    dataset.feature_names[i].clone()
                }
            })
            .collect(),
        r,
    })
}

/// One-way ANOVA F statistic and p-value over two or more groups.
///
/// When the within-group mean square is zero but the between-group one is
/// positive, the F statistic is reported as the infinity sentinel with p = 0.
pub fn anova_oneway(groups: &[Vec<f64>]) -> Result<(f64, f64)> {
    if groups.len() < 2 {
        return Err(Error::Contract("ANOVA needs at least two groups".into()));
    }
    let k = groups.len();
    let n: usize = groups.iter().map(Vec::len).sum();
    if n <= k {
        return Err(Error::Contract(
            "ANOVA needs more samples than groups".into(),
        ));
    }
    if groups.iter().any(Vec::is_empty) {
        return Err(Error::Contract("ANOVA groups must be non-empty".into()));
    }

    let grand_mean: f64 = groups.iter().flatten().sum::<f64>() / n as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        ss_between += g.len() as f64 * (mean - grand_mean).powi(2);
        ss_within += g.iter().map(|x| (x - mean).powi(2)).sum::<f64>();
    }
    let d1 = k - 1;
    let d2 = n - k;
    let ms_between = ss_between / d1 as f64;
    let ms_within = ss_within / d2 as f64;

    if ms_within == 0.0 {
        if ms_between > 0.0 {
            return Ok((f64::INFINITY, 0.0));
        }
        // All values identical everywhere: no evidence against equal means.
        return Ok((0.0, 1.0));
    }
    let f = ms_between / ms_within;
    let p = f_survival_p(f, d1, d2)?;
    Ok((f, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Matrix;
    use crate::rng::SplitMix64;

    #[test]
    fn histogram_uniform_unit_counts() {
        let values: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let h = histogram(&values, 10).unwrap();
        assert_eq!(h.counts, vec![1; 10]);
        assert_eq!(h.bin_edges.len(), 11);
    }

    #[test]
    fn histogram_constant_vector_single_bin_mass() {
        let h = histogram(&[3.0; 7], 4).unwrap();
        assert_eq!(h.counts.iter().sum::<usize>(), 7);
        assert_eq!(h.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert!(h.bin_edges[0] <= 2.5 + 1e-12);
        assert!(h.bin_edges[4] >= 3.5 - 1e-12);
    }

    #[test]
    fn histogram_right_edge_inclusive() {
        let h = histogram(&[0.0, 1.0], 2).unwrap();
        assert_eq!(h.counts, vec![1, 1]);
    }

    #[test]
    fn histogram_empty_is_error() {
        assert!(histogram(&[], 5).is_err());
    }

    #[test]
    fn histogram_counts_permutation_invariant() {
        let mut rng = SplitMix64::new(11);
        let values: Vec<f64> = (0..200).map(|_| rng.next_f64() * 10.0).collect();
        let h1 = histogram(&values, 13).unwrap();
        let mut shuffled = values.clone();
        rng.shuffle(&mut shuffled);
        let h2 = histogram(&shuffled, 13).unwrap();
        assert_eq!(h1, h2);
    }

    #[test]
    fn pearson_self_and_negation() {
        let x = vec![1.0, 2.0, 4.0, 8.0];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson(&x, &x).unwrap(), 1.0);
        assert_eq!(pearson(&x, &neg).unwrap(), -1.0);
    }

    #[test]
    fn pearson_affine_invariance() {
        let mut rng = SplitMix64::new(2);
        let x: Vec<f64> = (0..50).map(|_| rng.next_f64()).collect();
        let y: Vec<f64> = (0..50).map(|_| rng.next_f64()).collect();
        let base = pearson(&x, &y).unwrap();
        let scaled: Vec<f64> = x.iter().map(|v| 3.5 * v + 2.0).collect();
        assert!((pearson(&scaled, &y).unwrap() - base).abs() < 1e-12);
        let flipped: Vec<f64> = x.iter().map(|v| -2.0 * v + 1.0).collect();
        assert!((pearson(&flipped, &y).unwrap() + base).abs() < 1e-12);
    }

    #[test]
    fn pearson_zero_variance_is_error() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn correlation_matrix_perfectly_linear_pair() {
        let features = Matrix::from_vec(4, 2, vec![1.0, 2.0, 2.0, 4.0, 3.0, 6.0, 4.0, 8.0]).unwrap();
        let d = Dataset {
            features,
            target: vec![0.0, 1.0, 2.0, 3.0],
            feature_names: vec!["x".into(), "y".into()],
        };
        let c = correlation_matrix(&d, false).unwrap();
        assert!((c.r.get(0, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn correlation_matrix_is_exactly_symmetric() {
        let mut rng = SplitMix64::new(77);
        let data: Vec<f64> = (0..60).map(|_| rng.next_f64()).collect();
        let d = Dataset {
            features: Matrix::from_vec(20, 3, data).unwrap(),
            target: (0..20).map(|_| rng.next_f64()).collect(),
            feature_names: vec!["a".into(), "b".into(), "c".into()],
        };
        let c = correlation_matrix(&d, true).unwrap();
        for i in 0..c.r.n_rows() {
            assert_eq!(c.r.get(i, i), 1.0);
            for j in 0..c.r.n_cols() {
                assert_eq!(c.r.get(i, j), c.r.get(j, i));
                assert!(c.r.get(i, j).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn correlation_matrix_zero_variance_column_reported() {
        let d = Dataset {
            features: Matrix::from_vec(3, 2, vec![1.0, 5.0, 2.0, 5.0, 3.0, 5.0]).unwrap(),
            target: vec![1.0, 2.0, 3.0],
            feature_names: vec!["x".into(), "flat".into()],
        };
        let c = correlation_matrix(&d, false).unwrap();
        assert_eq!(c.zero_variance, vec!["flat".to_string()]);
        assert_eq!(c.r.get(0, 1), 0.0);
        assert_eq!(c.r.get(1, 1), 1.0);
    }

    #[test]
    fn anova_equal_means_zero_f() {
        let (f, p) = anova_oneway(&[vec![1.0, 3.0], vec![1.0, 3.0]]).unwrap();
        assert_eq!(f, 0.0);
        assert_eq!(p, 1.0);
    }

    #[test]
    fn anova_zero_within_variance_sentinel() {
        let (f, p) = anova_oneway(&[vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        assert!(f.is_infinite());
        assert_eq!(p, 0.0);
    }

    #[test]
    fn anova_fewer_than_two_groups_is_error() {
        assert!(anova_oneway(&[vec![1.0, 2.0]]).is_err());
    }

    // Independent sum-of-squares oracle on random groups.
    #[test]
    fn anova_matches_direct_sums_of_squares() {
        let mut rng = SplitMix64::new(31);
        let groups: Vec<Vec<f64>> = (0..3)
            .map(|g| {
                (0..8 + g)
                    .map(|_| rng.next_f64() * 4.0 + g as f64)
                    .collect()
            })
            .collect();
        let (f, p) = anova_oneway(&groups).unwrap();

        // Oracle: recompute from scratch with a different accumulation path.
        let all: Vec<f64> = groups.iter().flatten().cloned().collect();
        let n = all.len() as f64;
        let grand = all.iter().sum::<f64>() / n;
        let ss_total: f64 = all.iter().map(|x| (x - grand).powi(2)).sum();
        let ss_within: f64 = groups
            .iter()
            .map(|g| {
                let m = g.iter().sum::<f64>() / g.len() as f64;
                g.iter().map(|x| (x - m).powi(2)).sum::<f64>()
            })
            .sum();
        let ss_between = ss_total - ss_within;
        let d1 = (groups.len() - 1) as f64;
        let d2 = n - groups.len() as f64;
        let f_oracle = (ss_between / d1) / (ss_within / d2);
        assert!((f - f_oracle).abs() < 1e-10, "{f} vs {f_oracle}");
        assert!(p > 0.0 && p <= 1.0);
    }

    #[test]
    fn anova_invariant_under_within_group_permutation() {
        let mut rng = SplitMix64::new(13);
        let mut groups: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..10).map(|_| rng.next_f64()).collect())
            .collect();
        let (f1, p1) = anova_oneway(&groups).unwrap();
        for g in &mut groups {
            rng.shuffle(g);
        }
        let (f2, p2) = anova_oneway(&groups).unwrap();
        assert!((f1 - f2).abs() < 1e-12);
        assert!((p1 - p2).abs() < 1e-12);
    }
}
