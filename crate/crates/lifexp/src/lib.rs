//! Life-expectancy modeling toolkit.
//!
//! Everything here is built from scratch on `f64` slices and a small dense
//! [`numerics::Matrix`]: CSV cleaning into a [`tabular::Dataset`],
//! exploratory statistics, clustering and PCA, three regression models with
//! interpretability outputs, model selection with k-fold grid search, and a
//! reporting layer that serializes runs to JSON and renders SVG charts.
//!
//! The crate is deterministic end to end: every stochastic routine takes an
//! explicit 64-bit seed and runs on the fixed generator in [`rng`], so two
//! runs with the same inputs produce byte-identical artifacts.
//!
//! The `examples/` directory demonstrates each capability on the bundled
//! dataset; the `lifexp` binary chains them into a reproducible pipeline.

pub mod chart;
pub mod config;
pub mod error;
pub mod evaluation;
pub mod explore;
pub mod models;
pub mod numerics;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod tabular;
pub mod unsupervised;

pub use error::{Error, Result};
