//! The scaler × algorithm × k selection sweep, scored by silhouette.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{euclidean, Matrix};

use super::agglomerative::{cut_dendrogram, ward_dendrogram};
use super::kmeans::kmeans_core;
use super::scaler::{fit_scaler, ScalerKind};
use super::silhouette::silhouette_from_distances;

/// Restart and iteration defaults for every k-means fit in the sweep.
pub const KMEANS_N_INIT: usize = 10;
pub const KMEANS_MAX_ITER: usize = 300;

const SCALER_ORDER: [ScalerKind; 3] = [ScalerKind::Standard, ScalerKind::MinMax, ScalerKind::MaxAbs];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    KMeans,
    Agglomerative,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::KMeans => "kmeans",
            Algorithm::Agglomerative => "agglomerative",
        }
    }
}

/// One evaluated configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub scaler: ScalerKind,
    pub algorithm: Algorithm,
    pub k: usize,
    pub silhouette: f64,
}

/// Full sweep output: every configuration, the argmax, the winner's labels,
/// and the silhouette-vs-k curve for the winning scaler/algorithm.
#[derive(Debug, Clone)]
pub struct ClusterSelectionReport {
    pub grid: Vec<GridCell>,
    pub winner: GridCell,
    pub winner_labels: Vec<usize>,
    pub silhouette_curve: Vec<(usize, f64)>,
}

/// Evaluates every (scaler, algorithm, k) configuration over the given seed
/// and picks the highest silhouette. Ties break toward smaller k, then the
/// scaler order Standard, MinMax, MaxAbs, then k-means before agglomerative.
pub fn select_clustering(
    x_raw: &Matrix,
    k_range: (usize, usize),
    seed: u64,
) -> Result<ClusterSelectionReport> {
    let (k_min, k_max) = k_range;
    let n = x_raw.n_rows();
    if k_min == 0 || k_min > k_max {
        return Err(Error::Contract(format!(
            "invalid k range [{k_min}, {k_max}]"
        )));
    }
    if k_max > n {
        return Err(Error::Contract(format!(
            "k_max {k_max} exceeds {n} samples"
        )));
    }

    let mut grid = Vec::new();
    let mut labels_per_cell: Vec<Vec<usize>> = Vec::new();

    for &scaler_kind in &SCALER_ORDER {
        let scaled = fit_scaler(scaler_kind, x_raw)?.transform(x_raw)?;

        // Pairwise distances and the Ward dendrogram are shared across every
        // k for this scaler.
        let mut dist = vec![0.0_f64; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(scaled.row(i), scaled.row(j));
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let merges = ward_dendrogram(&scaled)?;

        for algorithm in [Algorithm::KMeans, Algorithm::Agglomerative] {
            for k in k_min..=k_max {
                let labels = match algorithm {
                    Algorithm::KMeans => {
                        kmeans_core(&scaled, k, seed, KMEANS_MAX_ITER, KMEANS_N_INIT)?.0
                    }
                    Algorithm::Agglomerative => cut_dendrogram(n, &merges, k)?,
                };
                let s = silhouette_from_distances(&dist, n, &labels);
                grid.push(GridCell {
                    scaler: scaler_kind,
                    algorithm,
                    k,
                    silhouette: s,
                });
                labels_per_cell.push(labels);
            }
        }
    }

    let winner_index = pick_winner(&grid);
    let winner = grid[winner_index];
    let silhouette_curve = grid
        .iter()
        .filter(|c| c.scaler == winner.scaler && c.algorithm == winner.algorithm)
        .map(|c| (c.k, c.silhouette))
        .collect();

    Ok(ClusterSelectionReport {
        winner,
        winner_labels: labels_per_cell.swap_remove(winner_index),
        silhouette_curve,
        grid,
    })
}

fn pick_winner(grid: &[GridCell]) -> usize {
    let rank = |c: &GridCell| {
        let scaler_rank = SCALER_ORDER.iter().position(|&s| s == c.scaler).unwrap();
        let alg_rank = match c.algorithm {
            Algorithm::KMeans => 0usize,
            Algorithm::Agglomerative => 1,
        };
        (c.k, scaler_rank, alg_rank)
    };
    let mut best = 0;
    for i in 1..grid.len() {
        if grid[i].silhouette > grid[best].silhouette
            || (grid[i].silhouette == grid[best].silhouette && rank(&grid[i]) < rank(&grid[best]))
        {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn three_blobs() -> Matrix {
        let mut rng = SplitMix64::new(500);
        let centers = [(0.0, 0.0), (8.0, 8.0), (0.0, 9.0)];
        let mut rows = Vec::new();
        for &(cx, cy) in &centers {
            for _ in 0..12 {
                rows.push(vec![
                    cx + rng.next_f64() - 0.5,
                    cy + rng.next_f64() - 0.5,
                ]);
            }
        }
        Matrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn single_configuration_grid_wins_trivially() {
        let x = three_blobs();
        let report = select_clustering(&x, (3, 3), 42).unwrap();
        // 3 scalers × 2 algorithms × 1 k = 6 cells; the winner is among them.
        assert_eq!(report.grid.len(), 6);
        assert_eq!(report.winner.k, 3);
        assert!(report
            .grid
            .iter()
            .all(|c| c.silhouette <= report.winner.silhouette));
    }

    #[test]
    fn winner_dominates_grid_and_curve_matches() {
        let x = three_blobs();
        let report = select_clustering(&x, (2, 6), 42).unwrap();
        assert_eq!(report.winner.k, 3, "three blobs favor k = 3");
        for cell in &report.grid {
            assert!(report.winner.silhouette >= cell.silhouette);
        }
        assert_eq!(report.silhouette_curve.len(), 5);
        let curve_at_winner = report
            .silhouette_curve
            .iter()
            .find(|&&(k, _)| k == report.winner.k)
            .unwrap();
        assert_eq!(curve_at_winner.1, report.winner.silhouette);
    }

    #[test]
    fn same_seed_reproduces_report() {
        let x = three_blobs();
        let a = select_clustering(&x, (1, 5), 7).unwrap();
        let b = select_clustering(&x, (1, 5), 7).unwrap();
        assert_eq!(a.grid, b.grid);
        assert_eq!(a.winner, b.winner);
        assert_eq!(a.winner_labels, b.winner_labels);
    }

    #[test]
    fn k_one_scores_zero_by_convention() {
        let x = three_blobs();
        let report = select_clustering(&x, (1, 2), 42).unwrap();
        for cell in report.grid.iter().filter(|c| c.k == 1) {
            assert_eq!(cell.silhouette, 0.0);
        }
    }

    #[test]
    fn k_max_beyond_n_is_error() {
        let x = Matrix::from_vec(3, 1, vec![0.0, 1.0, 2.0]).unwrap();
        assert!(select_clustering(&x, (1, 4), 42).is_err());
    }
}
