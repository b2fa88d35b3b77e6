//! Time-cluster / spatial-lobe partitioning: time clusters separated by a
//! minimum void interval, spatial lobes as thresholded connected regions of
//! the angular spectrum, and the ensemble statistics built on them.

mod lobes;
mod render;
mod summary;
mod time;

pub use lobes::{extract_spatial_lobes, lobe_rms_spreads, LobeCell, SpatialLobe, DEFAULT_LOBE_THRESHOLD_DB};
pub use render::render_lobe_spectrum;
pub use summary::{
    fit_decay, observe_cir, observe_pas, observe_pdp, summarize, tcsl_summary, ClusterObservation, DecayFit,
    LobeObservation, Moments, TcslConfig, TcslObservation, TcslSummary,
};
pub use time::{
    occupied_bins, partition_delays, partition_time_clusters, partition_time_clusters_with, TimeCluster,
    DEFAULT_OCCUPANCY_SNR_DB, DEFAULT_VOID_NS,
};
