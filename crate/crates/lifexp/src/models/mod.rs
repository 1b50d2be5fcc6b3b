//! The three predictors: ordinary least squares with coefficient inference,
//! a CART regression tree with cost-complexity pruning, and a random forest.

mod forest;
mod ols;
mod tree;

pub use forest::{forest_fit, forest_importances, forest_predict, Forest, ForestParams, MaxFeatures};
pub use ols::{ols_fit, ols_predict, ols_significant_features, OlsModel};
pub use tree::{
    tree_fit, tree_importances, tree_predict, tree_prune, tree_render, Criterion, TreeNode,
    TreeParams,
};
