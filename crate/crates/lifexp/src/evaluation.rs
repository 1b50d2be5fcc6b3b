//! Train/test splitting, k-fold cross-validation, grid search maximizing
//! R², regression metrics, and wall-clock timing.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::rng::SplitMix64;
use crate::tabular::Dataset;

/// A seeded train/test partition of row indices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
    pub ratio: f64,
}

/// Shuffles `0..n` with the seeded generator and takes the first
/// `floor(ratio·n)` indices as the training set.
pub fn train_test_split(n: usize, ratio: f64, seed: u64) -> Result<SplitIndices> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Contract(format!(
            "split ratio must lie in (0, 1), got {ratio}"
        )));
    }
    if n < 2 {
        return Err(Error::Contract("need at least two rows to split".into()));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut indices);
    let cut = (ratio * n as f64).floor() as usize;
    if cut == 0 || cut == n {
        return Err(Error::Contract(format!(
            "split of {n} rows at ratio {ratio} leaves an empty side"
        )));
    }
    let test = indices.split_off(cut);
    Ok(SplitIndices {
        train: indices,
        test,
        seed,
        ratio,
    })
}

/// Shuffles `0..n` and partitions it into `k` validation folds whose sizes
/// differ by at most one, larger folds first.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 || k > n {
        return Err(Error::Contract(format!(
            "k-fold needs 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    SplitMix64::new(seed).shuffle(&mut indices);
    let base = n / k;
    let extra = n % k;
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let size = base + usize::from(i < extra);
        folds.push(indices[start..start + size].to_vec());
        start += size;
    }
    Ok(folds)
}

/// Standard regression metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSet {
    pub r2: f64,
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
}

/// R² = 1 − SS_res/SS_tot plus MAE/MSE/RMSE. A constant `y_true` makes R²
/// undefined; the error still carries the other three metrics.
pub fn compute_metrics(y_true: &[f64], y_pred: &[f64]) -> Result<MetricSet> {
    if y_true.len() != y_pred.len() || y_true.is_empty() {
        return Err(Error::Shape(format!(
            "metric inputs must be equal-length and non-empty ({} vs {})",
            y_true.len(),
            y_pred.len()
        )));
    }
    let n = y_true.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    for (t, p) in y_true.iter().zip(y_pred) {
        let d = t - p;
        abs_sum += d.abs();
        sq_sum += d * d;
    }
    let mae = abs_sum / n;
    let mse = sq_sum / n;
    let rmse = mse.sqrt();

    let mean = y_true.iter().sum::<f64>() / n;
    let ss_tot: f64 = y_true.iter().map(|t| (t - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(Error::ConstantTarget { mae, mse, rmse });
    }
    Ok(MetricSet {
        r2: 1.0 - sq_sum / ss_tot,
        mae,
        mse,
        rmse,
    })
}

/// One evaluated grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridCandidate<P> {
    pub params: P,
    pub fold_r2: Vec<f64>,
    pub mean_r2: f64,
}

/// All evaluated candidates plus the winner refit on the full training set.
#[derive(Debug)]
pub struct GridSearchResult<P, M> {
    pub candidates: Vec<GridCandidate<P>>,
    pub best_index: usize,
    pub model: M,
}

impl<P, M> GridSearchResult<P, M> {
    pub fn best(&self) -> &GridCandidate<P> {
        &self.candidates[self.best_index]
    }
}

/// Scores every candidate by k-fold cross-validated R² (folds fixed across
/// candidates), selects the maximum mean with ties going to the earlier
/// candidate, and refits the winner on the whole training set.
pub fn grid_search<P, M>(
    train: &Dataset,
    candidates: Vec<P>,
    k: usize,
    seed: u64,
    fit: impl Fn(&Dataset, &P) -> Result<M>,
    predict: impl Fn(&M, &Matrix) -> Result<Vec<f64>>,
) -> Result<GridSearchResult<P, M>>
where
    P: std::fmt::Debug + Clone,
{
    if candidates.is_empty() {
        return Err(Error::Contract("empty parameter grid".into()));
    }
    let folds = kfold(train.n_samples(), k, seed)?;
    // Materialize each fold's fit/validation datasets once; every candidate
    // reuses them.
    let fold_sets: Vec<(Dataset, Dataset)> = folds
        .iter()
        .enumerate()
        .map(|(i, fold)| {
            let complement: Vec<usize> = folds
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, f)| f.iter().copied())
                .collect();
            (train.select_rows(&complement), train.select_rows(fold))
        })
        .collect();

    let mut scored: Vec<GridCandidate<P>> = Vec::with_capacity(candidates.len());
    for params in &candidates {
        let named = |e: Error| Error::Candidate {
            candidate: format!("{params:?}"),
            source: Box::new(e),
        };
        let mut fold_r2 = Vec::with_capacity(k);
        for (fit_set, val_set) in &fold_sets {
            let model = fit(fit_set, params).map_err(named)?;
            let pred = predict(&model, &val_set.features).map_err(named)?;
            let metrics = compute_metrics(&val_set.target, &pred).map_err(named)?;
            fold_r2.push(metrics.r2);
        }
        let mean_r2 = fold_r2.iter().sum::<f64>() / k as f64;
        scored.push(GridCandidate {
            params: params.clone(),
            fold_r2,
            mean_r2,
        });
    }

    let mut best_index = 0;
    for (i, c) in scored.iter().enumerate() {
        if c.mean_r2 > scored[best_index].mean_r2 {
            best_index = i;
        }
    }

    let winner = &scored[best_index];
    let model = fit(train, &winner.params).map_err(|e| Error::Candidate {
        candidate: format!("{:?}", winner.params),
        source: Box::new(e),
    })?;

    Ok(GridSearchResult {
        candidates: scored,
        best_index,
        model,
    })
}

/// Wall-clock timing record. `time_fit` fills the fit field; `time_predict`
/// the predict fields; the pipeline merges the two.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub fit_seconds: f64,
    pub predict_seconds_total: f64,
    pub predict_seconds_per_sample: f64,
    pub repeats: usize,
}

fn median_seconds(mut samples: Vec<f64>) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

/// Runs `fit` `repeats` times on the monotonic clock and reports the median
/// duration.
pub fn time_fit(mut fit: impl FnMut(), repeats: usize) -> Result<TimingReport> {
    if repeats == 0 {
        return Err(Error::Contract("timing needs repeats >= 1".into()));
    }
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        fit();
        samples.push(start.elapsed().as_secs_f64());
    }
    Ok(TimingReport {
        fit_seconds: median_seconds(samples),
        predict_seconds_total: 0.0,
        predict_seconds_per_sample: 0.0,
        repeats,
    })
}

/// Runs `predict` `repeats` times and reports the median total duration and
/// the per-sample share.
pub fn time_predict(
    mut predict: impl FnMut(),
    n_samples: usize,
    repeats: usize,
) -> Result<TimingReport> {
    if repeats == 0 {
        return Err(Error::Contract("timing needs repeats >= 1".into()));
    }
    if n_samples == 0 {
        return Err(Error::Contract("timing needs n_samples >= 1".into()));
    }
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        predict();
        samples.push(start.elapsed().as_secs_f64());
    }
    let total = median_seconds(samples);
    Ok(TimingReport {
        fit_seconds: 0.0,
        predict_seconds_total: total,
        predict_seconds_per_sample: total / n_samples as f64,
        repeats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{tree_fit, tree_predict, TreeParams};
    use crate::rng::SplitMix64;

    #[test]
    fn split_sizes_match_floor_arithmetic() {
        let s = train_test_split(941, 0.7, 42).unwrap();
        assert_eq!(s.train.len(), 658);
        assert_eq!(s.test.len(), 283);
    }

    #[test]
    fn split_same_seed_identical() {
        let a = train_test_split(100, 0.7, 7).unwrap();
        let b = train_test_split(100, 0.7, 7).unwrap();
        assert_eq!(a.train, b.train);
        assert_eq!(a.test, b.test);
    }

    #[test]
    fn split_union_and_disjointness() {
        let mut rng = SplitMix64::new(50);
        for _ in 0..20 {
            let n = 10 + rng.next_index(200);
            let ratio = 0.2 + rng.next_f64() * 0.6;
            let s = train_test_split(n, ratio, rng.next_u64()).unwrap();
            let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..n).collect::<Vec<_>>());
            assert_eq!(s.train.len(), (ratio * n as f64).floor() as usize);
        }
    }

    #[test]
    fn kfold_even_and_uneven_sizes() {
        let folds = kfold(10, 5, 1).unwrap();
        assert_eq!(folds.iter().map(Vec::len).collect::<Vec<_>>(), vec![2; 5]);
        let folds = kfold(11, 5, 1).unwrap();
        assert_eq!(
            folds.iter().map(Vec::len).collect::<Vec<_>>(),
            vec![3, 2, 2, 2, 2]
        );
    }

    #[test]
    fn kfold_partitions_exactly() {
        let folds = kfold(37, 4, 99).unwrap();
        let mut all: Vec<usize> = folds.into_iter().flatten().collect();
        all.sort_unstable();
        assert_eq!(all, (0..37).collect::<Vec<_>>());
    }

    #[test]
    fn kfold_k_out_of_range() {
        assert!(kfold(5, 6, 0).is_err());
        assert!(kfold(5, 1, 0).is_err());
    }

    #[test]
    fn metrics_perfect_prediction() {
        let y = vec![1.0, 2.0, 3.0];
        let m = compute_metrics(&y, &y).unwrap();
        assert_eq!(m.r2, 1.0);
        assert_eq!(m.mae, 0.0);
        assert_eq!(m.mse, 0.0);
        assert_eq!(m.rmse, 0.0);
    }

    #[test]
    fn metrics_mean_prediction_zero_r2() {
        let y = vec![1.0, 2.0, 3.0, 6.0];
        let mean = 3.0;
        let pred = vec![mean; 4];
        let m = compute_metrics(&y, &pred).unwrap();
        assert!(m.r2.abs() < 1e-14);
    }

    #[test]
    fn metrics_constant_target_error_carries_values() {
        match compute_metrics(&[2.0, 2.0], &[1.0, 3.0]) {
            Err(Error::ConstantTarget { mae, mse, rmse }) => {
                assert_eq!(mae, 1.0);
                assert_eq!(mse, 1.0);
                assert_eq!(rmse, 1.0);
            }
            other => panic!("expected constant-target error, got {other:?}"),
        }
    }

    #[test]
    fn mae_never_exceeds_rmse() {
        let mut rng = SplitMix64::new(1000);
        for _ in 0..1000 {
            let n = 2 + rng.next_index(20);
            let y: Vec<f64> = (0..n).map(|_| rng.next_f64() * 10.0 - 5.0).collect();
            let p: Vec<f64> = (0..n).map(|_| rng.next_f64() * 10.0 - 5.0).collect();
            match compute_metrics(&y, &p) {
                Ok(m) => assert!(m.mae <= m.rmse + 1e-12),
                Err(Error::ConstantTarget { mae, rmse, .. }) => {
                    assert!(mae <= rmse + 1e-12)
                }
                Err(e) => panic!("{e}"),
            }
        }
    }

    fn toy_dataset(n: usize, seed: u64) -> Dataset {
        let mut rng = SplitMix64::new(seed);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.next_f64() * 10.0, rng.next_f64() * 10.0])
            .collect();
        let ys: Vec<f64> = rows
            .iter()
            .map(|r| if r[0] > 5.0 { 8.0 } else { 2.0 } + rng.next_f64())
            .collect();
        Dataset {
            features: Matrix::from_rows(&rows).unwrap(),
            target: ys,
            feature_names: vec!["a".into(), "b".into()],
        }
    }

    #[test]
    fn single_point_grid_wins_with_its_score() {
        let d = toy_dataset(60, 8);
        let result = grid_search(
            &d,
            vec![TreeParams::default()],
            5,
            42,
            |ds, p| tree_fit(ds, p),
            |m, x| tree_predict(m, x),
        )
        .unwrap();
        assert_eq!(result.candidates.len(), 1);
        assert_eq!(result.best_index, 0);
        assert_eq!(result.candidates[0].fold_r2.len(), 5);
    }

    #[test]
    fn identical_candidates_tie_breaks_to_first() {
        let d = toy_dataset(50, 9);
        let result = grid_search(
            &d,
            vec![TreeParams::default(), TreeParams::default()],
            4,
            42,
            |ds, p| tree_fit(ds, p),
            |m, x| tree_predict(m, x),
        )
        .unwrap();
        assert_eq!(
            result.candidates[0].mean_r2,
            result.candidates[1].mean_r2
        );
        assert_eq!(result.best_index, 0);
    }

    #[test]
    fn best_mean_is_max_over_candidates() {
        let d = toy_dataset(80, 10);
        let grids = vec![
            TreeParams {
                max_depth: Some(1),
                ..TreeParams::default()
            },
            TreeParams {
                max_depth: Some(3),
                ..TreeParams::default()
            },
            TreeParams {
                max_depth: Some(6),
                ..TreeParams::default()
            },
        ];
        let result = grid_search(
            &d,
            grids,
            5,
            42,
            |ds, p| tree_fit(ds, p),
            |m, x| tree_predict(m, x),
        )
        .unwrap();
        let best = result.best().mean_r2;
        for c in &result.candidates {
            assert!(best >= c.mean_r2);
        }
    }

    #[test]
    fn timing_reports_positive_median_and_consistent_per_sample() {
        let t = time_fit(
            || {
                let mut acc = 0.0_f64;
                for i in 0..20_000 {
                    acc += (i as f64).sqrt();
                }
                std::hint::black_box(acc);
            },
            3,
        )
        .unwrap();
        assert!(t.fit_seconds > 0.0);
        assert_eq!(t.repeats, 3);

        let p = time_predict(
            || {
                std::hint::black_box(42);
            },
            7,
            5,
        )
        .unwrap();
        let recomposed = p.predict_seconds_per_sample * 7.0;
        assert!((recomposed - p.predict_seconds_total).abs() <= 1e-12 * p.predict_seconds_total.max(1.0));
    }
}
