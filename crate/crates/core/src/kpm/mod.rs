//! KPowerMeans joint delay-angle clustering with the multipath component
//! distance, Caliński-Harabasz / Davies-Bouldin validity indices,
//! cluster merging and outlier pruning.

mod lloyd;
mod mcd;
mod partition;
mod refine;
mod select;
mod stats;
mod validity;

pub use lloyd::{kpowermeans, kpowermeans_traced};
pub use mcd::{mcd, McdParams};
pub use partition::{adjusted_rand_index, Centroid, ClusterPartition};
pub(crate) use partition::relabel;
pub use refine::{combine_validate, shape_pruning, DEFAULT_COMBINE_T, DEFAULT_PRUNE_P, DEFAULT_PRUNE_S};
pub use select::{select_optimal_k, KScore, KSelection, DEFAULT_RESTARTS};
pub use stats::{cluster_statistics, ClusterSpreads, ClusterStats};
pub use validity::{ch_index, db_index, IndexScore};
