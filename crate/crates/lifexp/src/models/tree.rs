//! CART regression tree: greedy top-down induction with exact midpoint
//! split search, followed by minimal cost-complexity (weakest-link) pruning.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::rng::SplitMix64;
use crate::tabular::Dataset;

/// Split quality criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Node impurity = variance; leaves predict the mean.
    SquaredError,
    /// Node impurity = mean absolute deviation from the median; leaves
    /// predict the median.
    AbsoluteError,
}

impl Criterion {
    pub fn name(&self) -> &'static str {
        match self {
            Criterion::SquaredError => "squared_error",
            Criterion::AbsoluteError => "absolute_error",
        }
    }
}

/// Tree induction hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` means unlimited depth.
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
    pub ccp_alpha: f64,
    pub criterion: Criterion,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_leaf: 1,
            min_samples_split: 2,
            ccp_alpha: 0.0,
            criterion: Criterion::SquaredError,
        }
    }
}

/// A fitted (sub)tree. Split nodes keep their own training prediction so
/// pruning can collapse them without revisiting the data.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        value: f64,
        n_samples: usize,
        impurity: f64,
    },
    Split {
        feature_index: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
        n_samples: usize,
        impurity: f64,
        value: f64,
    },
}

impl TreeNode {
    pub fn n_samples(&self) -> usize {
        match self {
            TreeNode::Leaf { n_samples, .. } | TreeNode::Split { n_samples, .. } => *n_samples,
        }
    }

    pub fn impurity(&self) -> f64 {
        match self {
            TreeNode::Leaf { impurity, .. } | TreeNode::Split { impurity, .. } => *impurity,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            TreeNode::Leaf { value, .. } | TreeNode::Split { value, .. } => *value,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn max_feature_index(&self) -> Option<usize> {
        match self {
            TreeNode::Leaf { .. } => None,
            TreeNode::Split {
                feature_index,
                left,
                right,
                ..
            } => {
                let mut m = *feature_index;
                if let Some(l) = left.max_feature_index() {
                    m = m.max(l);
                }
                if let Some(r) = right.max_feature_index() {
                    m = m.max(r);
                }
                Some(m)
            }
        }
    }
}

fn validate_params(params: &TreeParams) -> Result<()> {
    if params.min_samples_leaf < 1 {
        return Err(Error::Contract("min_samples_leaf must be >= 1".into()));
    }
    if params.min_samples_split < 2 {
        return Err(Error::Contract("min_samples_split must be >= 2".into()));
    }
    if !(params.ccp_alpha >= 0.0) {
        return Err(Error::Contract("ccp_alpha must be >= 0".into()));
    }
    if params.max_depth == Some(0) {
        return Err(Error::Contract("max_depth must be >= 1 when set".into()));
    }
    Ok(())
}

/// Fits a CART tree and applies cost-complexity pruning at
/// `params.ccp_alpha`.
pub fn tree_fit(train: &Dataset, params: &TreeParams) -> Result<TreeNode> {
    validate_params(params)?;
    if train.n_samples() == 0 {
        return Err(Error::Contract("cannot fit a tree on an empty dataset".into()));
    }
    let indices: Vec<usize> = (0..train.n_samples()).collect();
    let root = grow(
        &train.features,
        &train.target,
        indices,
        0,
        params,
        &mut None,
    );
    Ok(tree_prune(root, params.ccp_alpha))
}

/// Optional per-node feature sampling used by random forests: a seeded
/// generator and the subset size drawn at every split.
pub(crate) type FeatureSampler = Option<(SplitMix64, usize)>;

/// Recursive induction. `sampler`, when present, draws a fresh feature
/// subset at every node; the subset is scanned in ascending index order so
/// tie-breaking stays global.
pub(crate) fn grow(
    features: &Matrix,
    target: &[f64],
    indices: Vec<usize>,
    depth: usize,
    params: &TreeParams,
    sampler: &mut FeatureSampler,
) -> TreeNode {
    let n = indices.len();
    let ys: Vec<f64> = indices.iter().map(|&i| target[i]).collect();
    let (value, impurity) = node_stats(&ys, params.criterion);

    let leaf = |value: f64, impurity: f64| TreeNode::Leaf {
        value,
        n_samples: n,
        impurity,
    };

    if impurity <= 0.0
        || n < params.min_samples_split
        || params.max_depth.is_some_and(|d| depth >= d)
    {
        return leaf(value, impurity);
    }

    let p = features.n_cols();
    let candidate_features: Vec<usize> = match sampler {
        Some((rng, m)) if *m < p => {
            let mut pool: Vec<usize> = (0..p).collect();
            for i in 0..*m {
                let j = i + rng.next_index(p - i);
                pool.swap(i, j);
            }
            let mut subset = pool[..*m].to_vec();
            subset.sort_unstable();
            subset
        }
        _ => (0..p).collect(),
    };

    let best = best_split(features, target, &indices, &candidate_features, impurity, params);
    let Some(split) = best else {
        return leaf(value, impurity);
    };

    let (mut left_idx, mut right_idx) = (Vec::new(), Vec::new());
    for &i in &indices {
        if features.get(i, split.feature) <= split.threshold {
            left_idx.push(i);
        } else {
            right_idx.push(i);
        }
    }
    drop(indices);

    let left = grow(features, target, left_idx, depth + 1, params, sampler);
    let right = grow(features, target, right_idx, depth + 1, params, sampler);
    TreeNode::Split {
        feature_index: split.feature,
        threshold: split.threshold,
        left: Box::new(left),
        right: Box::new(right),
        n_samples: n,
        impurity,
        value,
    }
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    decrease: f64,
}

/// Exhaustive scan over every candidate feature and every midpoint between
/// consecutive distinct values. Keeps the split with the largest weighted
/// impurity decrease; ties keep the lowest feature index, then the lowest
/// threshold (guaranteed by ascending scan order with strict comparison).
fn best_split(
    features: &Matrix,
    target: &[f64],
    indices: &[usize],
    candidate_features: &[usize],
    parent_impurity: f64,
    params: &TreeParams,
) -> Option<BestSplit> {
    let n = indices.len();
    let min_leaf = params.min_samples_leaf;
    if n < 2 * min_leaf {
        return None;
    }
    let mut best: Option<BestSplit> = None;

    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(n);
    for &f in candidate_features {
        pairs.clear();
        pairs.extend(indices.iter().map(|&i| (features.get(i, f), target[i])));
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        if pairs[0].0 == pairs[n - 1].0 {
            continue; // constant feature in this node
        }

        let ys: Vec<f64> = pairs.iter().map(|&(_, y)| y).collect();
        match params.criterion {
            Criterion::SquaredError => {
                // Prefix sums give each side's variance in O(1).
                let mut sum = 0.0;
                let mut sum_sq = 0.0;
                let prefix: Vec<(f64, f64)> = ys
                    .iter()
                    .map(|&y| {
                        sum += y;
                        sum_sq += y * y;
                        (sum, sum_sq)
                    })
                    .collect();
                let (total, total_sq) = prefix[n - 1];
                for s in min_leaf..=(n - min_leaf) {
                    if pairs[s - 1].0 == pairs[s].0 {
                        continue; // not a boundary between distinct values
                    }
                    let (ls, lsq) = prefix[s - 1];
                    let nl = s as f64;
                    let nr = (n - s) as f64;
                    let var_l = (lsq - ls * ls / nl) / nl;
                    let var_r = ((total_sq - lsq) - (total - ls) * (total - ls) / nr) / nr;
                    let child = (nl * var_l.max(0.0) + nr * var_r.max(0.0)) / n as f64;
                    consider(&mut best, parent_impurity - child, f, &pairs, s);
                }
            }
            Criterion::AbsoluteError => {
                let left_dev = prefix_abs_deviation(&ys);
                let rev: Vec<f64> = ys.iter().rev().cloned().collect();
                let right_dev = prefix_abs_deviation(&rev);
                for s in min_leaf..=(n - min_leaf) {
                    if pairs[s - 1].0 == pairs[s].0 {
                        continue;
                    }
                    let child = (left_dev[s] + right_dev[n - s]) / n as f64;
                    consider(&mut best, parent_impurity - child, f, &pairs, s);
                }
            }
        }
    }
    best.filter(|b| b.decrease > 0.0)
}

fn consider(best: &mut Option<BestSplit>, decrease: f64, feature: usize, pairs: &[(f64, f64)], s: usize) {
    if best.as_ref().is_some_and(|b| decrease <= b.decrease) {
        return;
    }
    let threshold = 0.5 * (pairs[s - 1].0 + pairs[s].0);
    *best = Some(BestSplit {
        feature,
        threshold,
        decrease,
    });
}

/// Node prediction and impurity under the criterion.
fn node_stats(ys: &[f64], criterion: Criterion) -> (f64, f64) {
    let n = ys.len() as f64;
    match criterion {
        Criterion::SquaredError => {
            let mean = ys.iter().sum::<f64>() / n;
            let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n;
            (mean, var.max(0.0))
        }
        Criterion::AbsoluteError => {
            let med = median(ys);
            let mad = ys.iter().map(|y| (y - med).abs()).sum::<f64>() / n;
            (med, mad)
        }
    }
}

fn median(ys: &[f64]) -> f64 {
    let mut v = ys.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Total-order wrapper so finite f64 targets can live in heaps.
#[derive(PartialEq)]
struct Key(f64);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// `out[s]` = Σ |y − median| over the first `s` values, for s in 0..=n.
/// Maintains the running median with the classic two-heap scheme plus side
/// sums, so each extension costs O(log n).
fn prefix_abs_deviation(ys: &[f64]) -> Vec<f64> {
    let mut low: BinaryHeap<Key> = BinaryHeap::new(); // max-heap, values ≤ median
    let mut high: BinaryHeap<Reverse<Key>> = BinaryHeap::new(); // min-heap
    let mut sum_low = 0.0;
    let mut sum_high = 0.0;
    let mut out = Vec::with_capacity(ys.len() + 1);
    out.push(0.0);

    for &y in ys {
        if low.peek().is_none_or(|top| y <= top.0) {
            low.push(Key(y));
            sum_low += y;
        } else {
            high.push(Reverse(Key(y)));
            sum_high += y;
        }
        // Rebalance so |low| is |high| or |high| + 1.
        if low.len() > high.len() + 1 {
            let Key(v) = low.pop().unwrap();
            sum_low -= v;
            sum_high += v;
            high.push(Reverse(Key(v)));
        } else if high.len() > low.len() {
            let Reverse(Key(v)) = high.pop().unwrap();
            sum_high -= v;
            sum_low += v;
            low.push(Key(v));
        }
        let med = if low.len() > high.len() {
            low.peek().unwrap().0
        } else {
            0.5 * (low.peek().unwrap().0 + high.peek().unwrap().0 .0)
        };
        let dev = (med * low.len() as f64 - sum_low) + (sum_high - med * high.len() as f64);
        out.push(dev.max(0.0));
    }
    out
}

/// Minimal cost-complexity pruning. Repeatedly collapses the internal node
/// with the smallest effective alpha
/// g(t) = (R(leaf_t) − R(subtree_t)) / (|leaves_t| − 1)
/// while g(t) ≤ `ccp_alpha`, where R is a node's training error under the
/// tree's criterion divided by the total training sample count. Ties
/// collapse the deeper node first, then the lower feature index.
pub fn tree_prune(mut root: TreeNode, ccp_alpha: f64) -> TreeNode {
    let n_total = root.n_samples();
    if n_total == 0 {
        return root;
    }
    loop {
        let Some((g, path)) = weakest_link(&root, n_total) else {
            return root; // already a single leaf
        };
        if g > ccp_alpha {
            return root;
        }
        collapse_at(&mut root, &path);
    }
}

/// Subtree training error divided by the total sample count.
fn subtree_risk(node: &TreeNode, n_total: usize) -> f64 {
    match node {
        TreeNode::Leaf {
            n_samples,
            impurity,
            ..
        } => *n_samples as f64 * impurity / n_total as f64,
        TreeNode::Split { left, right, .. } => {
            subtree_risk(left, n_total) + subtree_risk(right, n_total)
        }
    }
}

/// Finds the internal node minimizing g; ties prefer deeper nodes, then
/// lower feature indices. Returns the g value and the left/right path to
/// the node.
fn weakest_link(root: &TreeNode, n_total: usize) -> Option<(f64, Vec<bool>)> {
    struct Best {
        g: f64,
        depth: usize,
        feature: usize,
        path: Vec<bool>,
    }
    fn visit(node: &TreeNode, n_total: usize, depth: usize, path: &mut Vec<bool>, best: &mut Option<Best>) {
        let TreeNode::Split {
            feature_index,
            left,
            right,
            n_samples,
            impurity,
            ..
        } = node
        else {
            return;
        };
        let r_leaf = *n_samples as f64 * impurity / n_total as f64;
        let r_subtree = subtree_risk(node, n_total);
        let leaves = node.n_leaves();
        let g = (r_leaf - r_subtree) / (leaves - 1) as f64;
        let better = match best {
            None => true,
            Some(b) => {
                g < b.g
                    || (g == b.g
                        && (depth > b.depth || (depth == b.depth && *feature_index < b.feature)))
            }
        };
        if better {
            *best = Some(Best {
                g,
                depth,
                feature: *feature_index,
                path: path.clone(),
            });
        }
        path.push(true);
        visit(left, n_total, depth + 1, path, best);
        path.pop();
        path.push(false);
        visit(right, n_total, depth + 1, path, best);
        path.pop();
    }
    let mut best = None;
    visit(root, n_total, 0, &mut Vec::new(), &mut best);
    best.map(|b| (b.g, b.path))
}

fn collapse_at(root: &mut TreeNode, path: &[bool]) {
    let mut node = root;
    for &go_left in path {
        let TreeNode::Split { left, right, .. } = node else {
            return;
        };
        node = if go_left { left } else { right };
    }
    if let TreeNode::Split {
        n_samples,
        impurity,
        value,
        ..
    } = node
    {
        *node = TreeNode::Leaf {
            value: *value,
            n_samples: *n_samples,
            impurity: *impurity,
        };
    }
}

/// Routes each row down the tree (value ≤ threshold goes left) and returns
/// the leaf predictions.
pub fn tree_predict(root: &TreeNode, x: &Matrix) -> Result<Vec<f64>> {
    if let Some(max_f) = root.max_feature_index() {
        if max_f >= x.n_cols() {
            return Err(Error::Shape(format!(
                "tree splits on feature {max_f} but input has {} columns",
                x.n_cols()
            )));
        }
    }
    Ok((0..x.n_rows())
        .map(|r| {
            let mut node = root;
            loop {
                match node {
                    TreeNode::Leaf { value, .. } => return *value,
                    TreeNode::Split {
                        feature_index,
                        threshold,
                        left,
                        right,
                        ..
                    } => {
                        node = if x.get(r, *feature_index) <= *threshold {
                            left
                        } else {
                            right
                        };
                    }
                }
            }
        })
        .collect())
}

/// Impurity-based feature importances: each split contributes
/// n_samples × (impurity − weighted child impurity) to its feature, and the
/// vector is normalized to sum to 1. A single-leaf tree yields all zeros.
pub fn tree_importances(root: &TreeNode, n_features: usize) -> Vec<f64> {
    let mut acc = vec![0.0; n_features];
    fn walk(node: &TreeNode, acc: &mut [f64]) {
        if let TreeNode::Split {
            feature_index,
            left,
            right,
            n_samples,
            impurity,
            ..
        } = node
        {
            let n = *n_samples as f64;
            let child =
                (left.n_samples() as f64 * left.impurity() + right.n_samples() as f64 * right.impurity()) / n;
            acc[*feature_index] += n * (impurity - child).max(0.0);
            walk(left, acc);
            walk(right, acc);
        }
    }
    walk(root, &mut acc);
    let total: f64 = acc.iter().sum();
    if total > 0.0 {
        for v in &mut acc {
            *v /= total;
        }
    }
    acc
}

/// Renders the tree as indented text and as a DOT digraph, truncated below
/// `max_depth` with `...` elision markers.
pub fn tree_render(root: &TreeNode, max_depth: usize, feature_names: &[String]) -> (String, String) {
    let mut text = String::new();
    let mut dot = String::from("digraph tree {\n  node [shape=box];\n");
    let mut next_id = 0usize;
    render_node(root, 0, max_depth, feature_names, &mut text, &mut dot, &mut next_id);
    dot.push_str("}\n");
    (text, dot)
}

fn render_node(
    node: &TreeNode,
    depth: usize,
    max_depth: usize,
    names: &[String],
    text: &mut String,
    dot: &mut String,
    next_id: &mut usize,
) -> usize {
    let id = *next_id;
    *next_id += 1;
    let indent = "  ".repeat(depth);

    if depth >= max_depth {
        text.push_str(&format!("{indent}...\n"));
        dot.push_str(&format!("  n{id} [label=\"...\"];\n"));
        return id;
    }
    match node {
        TreeNode::Leaf {
            value,
            n_samples,
            impurity,
        } => {
            text.push_str(&format!(
                "{indent}leaf | n={n_samples} | impurity={impurity:.4} | value={value:.4}\n"
            ));
            dot.push_str(&format!(
                "  n{id} [label=\"n={n_samples}\\nimpurity={impurity:.4}\\nvalue={value:.4}\"];\n"
            ));
            id
        }
        TreeNode::Split {
            feature_index,
            threshold,
            left,
            right,
            n_samples,
            impurity,
            value,
        } => {
            let name = names
                .get(*feature_index)
                .map(String::as_str)
                .unwrap_or("feature");
            text.push_str(&format!(
                "{indent}{name} <= {threshold:.4} | n={n_samples} | impurity={impurity:.4} | value={value:.4}\n"
            ));
            dot.push_str(&format!(
                "  n{id} [label=\"{} <= {threshold:.4}\\nn={n_samples} impurity={impurity:.4}\\nvalue={value:.4}\"];\n",
                escape_dot(name)
            ));
            let left_id = render_node(left, depth + 1, max_depth, names, text, dot, next_id);
            let right_id = render_node(right, depth + 1, max_depth, names, text, dot, next_id);
            dot.push_str(&format!("  n{id} -> n{left_id};\n"));
            dot.push_str(&format!("  n{id} -> n{right_id};\n"));
            id
        }
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
