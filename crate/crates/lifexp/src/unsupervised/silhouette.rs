//! Mean silhouette score.

use crate::error::{Error, Result};
use crate::numerics::{euclidean, Matrix};

/// Mean over all points of (b − a) / max(a, b), where a is the mean
/// distance to the point's own cluster (excluding itself) and b the
/// smallest mean distance to any other cluster.
///
/// Conventions: a single-cluster labeling scores 0; a point alone in its
/// cluster scores 0; coincident points (a = b = 0) score 0.
pub fn silhouette(x: &Matrix, labels: &[usize]) -> Result<f64> {
    let n = x.n_rows();
    if n < 2 {
        return Err(Error::Contract("silhouette needs at least two points".into()));
    }
    if labels.len() != n {
        return Err(Error::Shape(format!(
            "{} labels for {n} rows",
            labels.len()
        )));
    }
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut counts = vec![0usize; k];
    for &l in labels {
        counts[l] += 1;
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::Contract("cluster ids must be contiguous from 0".into()));
    }
    if k == 1 {
        return Ok(0.0);
    }

    let mut total = 0.0;
    let mut sums = vec![0.0_f64; k];
    for i in 0..n {
        for s in sums.iter_mut() {
            *s = 0.0;
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            sums[labels[j]] += euclidean(x.row(i), x.row(j));
        }
        let own = labels[i];
        if counts[own] == 1 {
            continue; // singleton contributes 0
        }
        let a = sums[own] / (counts[own] - 1) as f64;
        let mut b = f64::INFINITY;
        for c in 0..k {
            if c == own {
                continue;
            }
            b = b.min(sums[c] / counts[c] as f64);
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}

/// Same score computed from a precomputed full distance matrix; used by the
/// selection sweep so 300 configurations do not re-derive pairwise
/// distances. Must agree with [`silhouette`] exactly.
pub(crate) fn silhouette_from_distances(dist: &[f64], n: usize, labels: &[usize]) -> f64 {
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    if k == 1 {
        return 0.0;
    }
    let mut counts = vec![0usize; k];
    for &l in labels {
        counts[l] += 1;
    }
    let mut total = 0.0;
    let mut sums = vec![0.0_f64; k];
    for i in 0..n {
        for s in sums.iter_mut() {
            *s = 0.0;
        }
        let row = &dist[i * n..(i + 1) * n];
        for j in 0..n {
            if i == j {
                continue;
            }
            sums[labels[j]] += row[j];
        }
        let own = labels[i];
        if counts[own] == 1 {
            continue;
        }
        let a = sums[own] / (counts[own] - 1) as f64;
        let mut b = f64::INFINITY;
        for c in 0..k {
            if c == own {
                continue;
            }
            b = b.min(sums[c] / counts[c] as f64);
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn single_cluster_scores_zero() {
        let x = Matrix::from_vec(3, 1, vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(silhouette(&x, &[0, 0, 0]).unwrap(), 0.0);
    }

    // Closed form: intra-pair distance 0.01, inter-pair distance ~10 gives
    // s ≈ (10 − 0.01)/10 ≈ 0.999.
    #[test]
    fn two_tight_pairs_near_one() {
        let x =
            Matrix::from_vec(4, 1, vec![0.0, 0.01, 10.0, 10.01]).unwrap();
        let s = silhouette(&x, &[0, 0, 1, 1]).unwrap();
        assert!((s - 0.999).abs() < 0.001, "s = {s}");
    }

    #[test]
    fn range_and_relabel_invariance() {
        let mut rng = SplitMix64::new(55);
        let data: Vec<f64> = (0..60).map(|_| rng.next_f64() * 5.0).collect();
        let x = Matrix::from_vec(30, 2, data).unwrap();
        let labels: Vec<usize> = (0..30).map(|_| rng.next_index(3)).collect();
        let s = silhouette(&x, &labels).unwrap();
        assert!((-1.0..=1.0).contains(&s));

        // Permute cluster ids: 0→2, 1→0, 2→1.
        let perm = [2usize, 0, 1];
        let relabeled: Vec<usize> = labels.iter().map(|&l| perm[l]).collect();
        let s2 = silhouette(&x, &relabeled).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn singleton_cluster_contributes_zero() {
        let x = Matrix::from_vec(3, 1, vec![0.0, 0.1, 50.0]).unwrap();
        let s = silhouette(&x, &[0, 0, 1]).unwrap();
        // Two near points score ~1 each, the singleton 0: mean ≈ 2/3.
        assert!(s > 0.6 && s < 0.67, "s = {s}");
    }

    #[test]
    fn cached_distance_route_is_exact() {
        let mut rng = SplitMix64::new(321);
        let n = 40;
        let data: Vec<f64> = (0..n * 3).map(|_| rng.next_f64() * 8.0).collect();
        let x = Matrix::from_vec(n, 3, data).unwrap();
        let labels: Vec<usize> = (0..n).map(|i| i % 4).collect();
        let direct = silhouette(&x, &labels).unwrap();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = euclidean(x.row(i), x.row(j));
            }
        }
        let cached = silhouette_from_distances(&dist, n, &labels);
        assert_eq!(direct, cached);
    }
}
