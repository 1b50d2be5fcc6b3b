//! Lloyd's k-means with k-means++ seeding and restart selection.

use crate::error::{Error, Result};
use crate::numerics::{squared_euclidean, Matrix};
use crate::rng::SplitMix64;

use super::silhouette::silhouette;

/// Centroid-shift threshold below which an iteration counts as converged.
const SHIFT_TOL: f64 = 1e-6;

/// A fitted clustering.
#[derive(Debug, Clone)]
pub struct ClusterResult {
    /// Cluster id per row, each in `[0, k)`; every cluster non-empty.
    pub labels: Vec<usize>,
    /// k×p centroid matrix.
    pub centroids: Matrix,
    /// Total squared distance from each point to its centroid.
    pub inertia: f64,
    /// Mean silhouette of the labeling.
    pub silhouette: f64,
}

/// Runs `n_init` seeded restarts of Lloyd's algorithm with k-means++
/// initialization and keeps the lowest-inertia fit.
pub fn kmeans(
    x: &Matrix,
    k: usize,
    seed: u64,
    max_iter: usize,
    n_init: usize,
) -> Result<ClusterResult> {
    let (labels, centroids, inertia) = kmeans_core(x, k, seed, max_iter, n_init)?;
    let silhouette = silhouette(x, &labels)?;
    Ok(ClusterResult {
        labels,
        centroids,
        inertia,
        silhouette,
    })
}

/// The fitting loop without the silhouette pass; the selection sweep scores
/// silhouettes from a cached distance matrix instead.
pub(crate) fn kmeans_core(
    x: &Matrix,
    k: usize,
    seed: u64,
    max_iter: usize,
    n_init: usize,
) -> Result<(Vec<usize>, Matrix, f64)> {
    let n = x.n_rows();
    if k == 0 || k > n {
        return Err(Error::Contract(format!(
            "k must lie in [1, {n}], got {k}"
        )));
    }
    if n_init == 0 || max_iter == 0 {
        return Err(Error::Contract("need n_init >= 1 and max_iter >= 1".into()));
    }

    let mut rng = SplitMix64::new(seed);
    let mut best: Option<(Vec<usize>, Matrix, f64)> = None;
    for _ in 0..n_init {
        let run = lloyd_once(x, k, &mut rng, max_iter);
        match &best {
            Some((_, _, best_inertia)) if run.2 >= *best_inertia => {}
            _ => best = Some(run),
        }
    }
    Ok(best.unwrap())
}

fn lloyd_once(x: &Matrix, k: usize, rng: &mut SplitMix64, max_iter: usize) -> (Vec<usize>, Matrix, f64) {
    let n = x.n_rows();
    let p = x.n_cols();
    let mut centroids = plus_plus_init(x, k, rng);
    let mut labels = vec![0usize; n];
    let mut first = true;

    for _iter in 0..max_iter {
        // Assignment step; ties go to the lower centroid index.
        let mut changed = false;
        for i in 0..n {
            let row = x.row(i);
            let mut best_c = 0;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = squared_euclidean(row, centroid);
                if d < best_d {
                    best_d = d;
                    best_c = c;
                }
            }
            if first || labels[i] != best_c {
                changed = true;
            }
            labels[i] = best_c;
        }
        first = false;

        // Repair empty clusters by seizing the point farthest from its own
        // centroid.
        loop {
            let mut counts = vec![0usize; k];
            for &l in &labels {
                counts[l] += 1;
            }
            let Some(empty) = counts.iter().position(|&c| c == 0) else {
                break;
            };
            let mut far_i = 0;
            let mut far_d = -1.0;
            for i in 0..n {
                if counts[labels[i]] <= 1 {
                    continue;
                }
                let d = squared_euclidean(x.row(i), &centroids[labels[i]]);
                if d > far_d {
                    far_d = d;
                    far_i = i;
                }
            }
            labels[far_i] = empty;
            changed = true;
        }

        // Update step.
        let mut sums = vec![vec![0.0; p]; k];
        let mut counts = vec![0usize; k];
        for i in 0..n {
            counts[labels[i]] += 1;
            for (s, &v) in sums[labels[i]].iter_mut().zip(x.row(i)) {
                *s += v;
            }
        }
        let mut max_shift: f64 = 0.0;
        for c in 0..k {
            for j in 0..p {
                sums[c][j] /= counts[c] as f64;
            }
            max_shift = max_shift.max(squared_euclidean(&sums[c], &centroids[c]).sqrt());
        }
        centroids = sums;

        if !changed || max_shift < SHIFT_TOL {
            break;
        }
    }

    let inertia: f64 = (0..n)
        .map(|i| squared_euclidean(x.row(i), &centroids[labels[i]]))
        .sum();
    let mut data = Vec::with_capacity(k * p);
    for c in centroids {
        data.extend(c);
    }
    (labels, Matrix::from_vec_unchecked(k, p, data), inertia)
}

/// k-means++ seeding: the first centroid is a uniformly random point; each
/// subsequent one is drawn with probability proportional to the squared
/// distance to the nearest centroid chosen so far.
fn plus_plus_init(x: &Matrix, k: usize, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    let n = x.n_rows();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(x.row(rng.next_index(n)).to_vec());

    let mut nearest: Vec<f64> = (0..n)
        .map(|i| squared_euclidean(x.row(i), &centroids[0]))
        .collect();

    while centroids.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.next_f64() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &d) in nearest.iter().enumerate() {
                acc += d;
                if acc >= target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // All remaining mass is zero (duplicate points); fall back to a
            // uniform draw so we still return k centroids.
            rng.next_index(n)
        };
        let new_centroid = x.row(pick).to_vec();
        for i in 0..n {
            let d = squared_euclidean(x.row(i), &new_centroid);
            if d < nearest[i] {
                nearest[i] = d;
            }
        }
        centroids.push(new_centroid);
    }
    centroids
}
