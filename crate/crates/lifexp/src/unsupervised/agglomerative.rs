//! Bottom-up agglomerative clustering under Ward linkage.

use crate::error::{Error, Result};
use crate::numerics::{squared_euclidean, Matrix};

/// Full merge sequence: `n − 1` pairs of active cluster slots, in merge
/// order. The pair `(i, j)` with `i < j` merges cluster `j` into slot `i`.
///
/// Distances follow the Lance–Williams recurrence for Ward linkage on
/// squared Euclidean distances:
/// d(i∪j, k) = [(nᵢ+nₖ)d(i,k) + (nⱼ+nₖ)d(j,k) − nₖ d(i,j)] / (nᵢ+nⱼ+nₖ).
/// Ties break toward the smallest pair indices.
pub fn ward_dendrogram(x: &Matrix) -> Result<Vec<(usize, usize)>> {
    let n = x.n_rows();
    if n == 0 {
        return Err(Error::Contract("cannot cluster an empty matrix".into()));
    }
    // Condensed distance matrix, indexed by (i, j) with i < j.
    let mut dist = vec![0.0_f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = squared_euclidean(x.row(i), x.row(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let mut active: Vec<bool> = vec![true; n];
    let mut sizes: Vec<f64> = vec![1.0; n];
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    for _ in 1..n {
        // Find the closest active pair; strict < keeps the smallest (i, j)
        // on ties because the scan runs in ascending index order.
        let mut best = (0usize, 0usize);
        let mut best_d = f64::INFINITY;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in (i + 1)..n {
                if !active[j] {
                    continue;
                }
                let d = dist[i * n + j];
                if d < best_d {
                    best_d = d;
                    best = (i, j);
                }
            }
        }
        let (a, b) = best;

        // Lance–Williams update of slot a against every other active slot.
        let (na, nb) = (sizes[a], sizes[b]);
        for k in 0..n {
            if !active[k] || k == a || k == b {
                continue;
            }
            let nk = sizes[k];
            let dak = dist[a * n + k];
            let dbk = dist[b * n + k];
            let dab = dist[a * n + b];
            let d = ((na + nk) * dak + (nb + nk) * dbk - nk * dab) / (na + nb + nk);
            dist[a * n + k] = d;
            dist[k * n + a] = d;
        }
        sizes[a] += sizes[b];
        active[b] = false;
        merges.push((a, b));
    }
    Ok(merges)
}

/// Replays the first `n − k` merges and returns labels in `[0, k)`,
/// numbered by first row occurrence.
pub fn cut_dendrogram(n: usize, merges: &[(usize, usize)], k: usize) -> Result<Vec<usize>> {
    if k == 0 || k > n {
        return Err(Error::Contract(format!("k must lie in [1, {n}], got {k}")));
    }
    // Union-find over slots; merges always fold j into i.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(i, j) in merges.iter().take(n - k) {
        let ri = find(&mut parent, i);
        let rj = find(&mut parent, j);
        parent[rj] = ri;
    }
    let mut label_of_root: Vec<Option<usize>> = vec![None; n];
    let mut next = 0;
    let mut labels = Vec::with_capacity(n);
    for v in 0..n {
        let r = find(&mut parent, v);
        let label = *label_of_root[r].get_or_insert_with(|| {
            let l = next;
            next += 1;
            l
        });
        labels.push(label);
    }
    Ok(labels)
}

/// Ward-linkage agglomerative clustering cut at `k` clusters.
pub fn agglomerative(x: &Matrix, k: usize) -> Result<Vec<usize>> {
    let n = x.n_rows();
    if k == 0 || k > n {
        return Err(Error::Contract(format!("k must lie in [1, {n}], got {k}")));
    }
    let merges = ward_dendrogram(x)?;
    cut_dendrogram(n, &merges, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_equals_n_is_identity_clustering() {
        let x = Matrix::from_vec(4, 1, vec![0.0, 1.0, 5.0, 9.0]).unwrap();
        let labels = agglomerative(&x, 4).unwrap();
        assert_eq!(labels, vec![0, 1, 2, 3]);
    }

    #[test]
    fn k_equals_one_is_single_cluster() {
        let x = Matrix::from_vec(3, 1, vec![0.0, 10.0, 20.0]).unwrap();
        let labels = agglomerative(&x, 1).unwrap();
        assert_eq!(labels, vec![0, 0, 0]);
    }

    #[test]
    fn k_out_of_range_is_error() {
        let x = Matrix::from_vec(2, 1, vec![0.0, 1.0]).unwrap();
        assert!(agglomerative(&x, 3).is_err());
        assert!(agglomerative(&x, 0).is_err());
    }

    // Hand-checkable Ward merge order: two tight pairs far apart merge
    // within pairs first, so k = 2 groups the pairs. Coordinates are exact
    // in binary so the two intra-pair gaps tie and the (0,1) merge comes
    // first by the smallest-pair rule.
    #[test]
    fn two_distant_pairs_grouped() {
        let x =
            Matrix::from_vec(4, 2, vec![0.0, 0.0, 0.125, 0.0, 10.0, 0.0, 10.125, 0.0]).unwrap();
        let labels = agglomerative(&x, 2).unwrap();
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[2], labels[3]);
        assert_ne!(labels[0], labels[2]);

        // Merge order itself is hand-checkable: (0,1) then (2,3).
        let merges = ward_dendrogram(&x).unwrap();
        assert_eq!(merges[0], (0, 1));
        assert_eq!(merges[1], (2, 3));
    }

    // Ward merge cost against the direct formula on a 3-point line:
    // merging {0 at x=0, 1 at x=1} first, then the pair-cluster with x=5.
    // Δ({0,1}, {2}) = n₁n₂/(n₁+n₂)·‖μ₁−μ₂‖² = (2·1/3)·(0.5−5)² = 13.5,
    // and the Lance–Williams value is 2Δ on squared distances.
    #[test]
    fn lance_williams_matches_direct_ward_cost() {
        let x = Matrix::from_vec(3, 1, vec![0.0, 1.0, 5.0]).unwrap();
        let n = 3;
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = squared_euclidean(x.row(i), x.row(j));
            }
        }
        // After merging (0,1): d({0,1},2) per Lance–Williams.
        let d = ((1.0 + 1.0) * dist[2] + (1.0 + 1.0) * dist[n + 2] - 1.0 * dist[1]) / 3.0;
        let mu_pair = 0.5;
        let direct = 2.0 * (2.0 * 1.0 / 3.0) * (mu_pair - 5.0_f64).powi(2);
        assert!((d - direct).abs() < 1e-12, "{d} vs {direct}");
    }

    #[test]
    fn labels_numbered_by_first_occurrence() {
        let x = Matrix::from_vec(5, 1, vec![100.0, 0.0, 0.2, 100.3, 0.1]).unwrap();
        let labels = agglomerative(&x, 2).unwrap();
        // Row 0 must carry label 0 regardless of cluster contents.
        assert_eq!(labels[0], 0);
        assert_eq!(labels[1], 1);
        assert_eq!(labels, vec![0, 1, 1, 0, 1]);
    }
}
