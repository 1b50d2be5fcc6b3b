//! Random forest regressor: seeded bootstrap resampling plus per-node
//! feature subsampling over the CART grower.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::rng::{derive_seed, SplitMix64};
use crate::tabular::Dataset;

use super::tree::{grow, tree_importances, tree_predict, tree_prune, TreeNode, TreeParams};

/// How many features each split considers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxFeatures {
    All,
    /// ceil(√p)
    Sqrt,
    /// ceil(log₂ p)
    Log2,
    /// ceil(f·p) for f in (0, 1]
    Fraction(f64),
}

impl MaxFeatures {
    pub fn resolve(&self, p: usize) -> usize {
        let m = match self {
            MaxFeatures::All => p,
            MaxFeatures::Sqrt => (p as f64).sqrt().ceil() as usize,
            MaxFeatures::Log2 => (p as f64).log2().ceil() as usize,
            MaxFeatures::Fraction(f) => (f * p as f64).ceil() as usize,
        };
        m.clamp(1, p)
    }

    pub fn label(&self) -> String {
        match self {
            MaxFeatures::All => "all".into(),
            MaxFeatures::Sqrt => "sqrt".into(),
            MaxFeatures::Log2 => "log2".into(),
            MaxFeatures::Fraction(f) => format!("fraction:{f}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub max_features: MaxFeatures,
    pub tree: TreeParams,
    pub seed: u64,
}

/// A fitted ensemble.
#[derive(Debug, Clone)]
pub struct Forest {
    pub trees: Vec<TreeNode>,
    pub n_features: usize,
}

/// Trains `n_trees` CART trees. Per-tree generators derive deterministically
/// from `(seed, tree index)`, so fits do not depend on evaluation order.
/// With bootstrap off and all features in play, every tree is identical to
/// a plain [`super::tree_fit`].
pub fn forest_fit(train: &Dataset, params: &ForestParams) -> Result<Forest> {
    let n = train.n_samples();
    if n == 0 {
        return Err(Error::Contract("cannot fit a forest on an empty dataset".into()));
    }
    if params.n_trees == 0 {
        return Err(Error::Contract("forest needs at least one tree".into()));
    }
    if let MaxFeatures::Fraction(f) = params.max_features {
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::Contract(format!(
                "max_features fraction must lie in (0, 1], got {f}"
            )));
        }
    }

    let p = train.n_features();
    let m = params.max_features.resolve(p.max(1));
    let mut trees = Vec::with_capacity(params.n_trees);
    for t in 0..params.n_trees {
        let mut rng = SplitMix64::new(derive_seed(params.seed, t as u64));
        let indices: Vec<usize> = if params.bootstrap {
            (0..n).map(|_| rng.next_index(n)).collect()
        } else {
            (0..n).collect()
        };
        let mut sampler = if m < p {
            Some((rng, m))
        } else {
            None
        };
        let root = grow(
            &train.features,
            &train.target,
            indices,
            0,
            &params.tree,
            &mut sampler,
        );
        trees.push(tree_prune(root, params.tree.ccp_alpha));
    }
    Ok(Forest {
        trees,
        n_features: p,
    })
}

/// Arithmetic mean of the member trees' predictions.
pub fn forest_predict(forest: &Forest, x: &Matrix) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; x.n_rows()];
    for tree in &forest.trees {
        let pred = tree_predict(tree, x)?;
        for (a, v) in acc.iter_mut().zip(pred) {
            *a += v;
        }
    }
    let k = forest.trees.len() as f64;
    for a in &mut acc {
        *a /= k;
    }
    Ok(acc)
}

/// Mean of the per-tree importances, renormalized to sum to 1 (all zeros if
/// no tree ever split).
pub fn forest_importances(forest: &Forest) -> Vec<f64> {
    let p = forest.n_features;
    let mut acc = vec![0.0; p];
    for tree in &forest.trees {
        for (a, v) in acc.iter_mut().zip(tree_importances(tree, p)) {
            *a += v;
        }
    }
    let total: f64 = acc.iter().sum();
    if total > 0.0 {
        for a in &mut acc {
            *a /= total;
        }
    }
    acc
}
