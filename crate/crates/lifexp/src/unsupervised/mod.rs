//! Scaling, clustering, silhouette scoring, the scaler/algorithm/k selection
//! sweep, and PCA.

mod agglomerative;
mod kmeans;
mod pca;
mod scaler;
mod select;
mod silhouette;

pub use agglomerative::{agglomerative, ward_dendrogram, cut_dendrogram};
pub use kmeans::{kmeans, ClusterResult};
pub use pca::{pca_fit, pca_transform, PcaModel};
pub use scaler::{fit_scaler, Scaler, ScalerKind};
pub use select::{select_clustering, Algorithm, ClusterSelectionReport, GridCell};
pub use silhouette::silhouette;
