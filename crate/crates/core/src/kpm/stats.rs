use serde::{Deserialize, Serialize};

use super::partition::ClusterPartition;
use crate::error::Result;
use crate::lsp::{circular_spread, zenith_spread};
use crate::types::MultipathComponent;
use crate::units::{linear_to_db, mean_std};

/// Intra-cluster spreads and size of one cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpreads {
    pub asd_deg: f64,
    pub asa_deg: f64,
    pub zsd_deg: f64,
    pub zsa_deg: f64,
    pub num_paths: usize,
    pub power_mw: f64,
    pub mean_delay_ns: f64,
}

/// Per-cluster statistics of a partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub clusters: Vec<ClusterSpreads>,
    pub num_clusters: usize,
    pub mean_subpaths: f64,
    /// Std (dB) of cluster-power residuals about the least-squares line of
    /// cluster power (dB) versus cluster delay; `None` with fewer than three
    /// clusters.
    pub shadowing_db: Option<f64>,
}

impl ClusterStats {
    /// (mean, std) of one spread over clusters.
    pub fn spread_summary(&self, pick: impl Fn(&ClusterSpreads) -> f64) -> (f64, f64) {
        let v: Vec<f64> = self.clusters.iter().map(pick).collect();
        mean_std(&v)
    }
}

/// Intra-cluster angular spreads and exponential-decay shadowing.
pub fn cluster_statistics(partition: &ClusterPartition, paths: &[MultipathComponent]) -> Result<ClusterStats> {
    let mut clusters = Vec::new();
    for c in 0..partition.k() {
        let m = partition.members(c);
        if m.is_empty() {
            continue;
        }
        let pw: Vec<f64> = m.iter().map(|&i| paths[i].power_mw).collect();
        let get = |f: fn(&MultipathComponent) -> f64| m.iter().map(|&i| f(&paths[i])).collect::<Vec<f64>>();
        let total: f64 = pw.iter().sum();
        clusters.push(ClusterSpreads {
            asd_deg: circular_spread(&get(|p| p.aod_azimuth_deg), &pw)?,
            asa_deg: circular_spread(&get(|p| p.aoa_azimuth_deg), &pw)?,
            zsd_deg: zenith_spread(&get(|p| p.aod_elevation_deg), &pw)?,
            zsa_deg: zenith_spread(&get(|p| p.aoa_elevation_deg), &pw)?,
            num_paths: m.len(),
            power_mw: total,
            mean_delay_ns: get(|p| p.delay_ns).iter().zip(&pw).map(|(d, p)| d * p).sum::<f64>() / total,
        });
    }
    let n = clusters.len();
    let mean_subpaths = clusters.iter().map(|c| c.num_paths as f64).sum::<f64>() / n.max(1) as f64;
    let shadowing_db = if n >= 3 {
        let x: Vec<f64> = clusters.iter().map(|c| c.mean_delay_ns).collect();
        let y: Vec<f64> = clusters.iter().map(|c| linear_to_db(c.power_mw)).collect();
        Some(residual_std(&x, &y))
    } else {
        None
    };
    Ok(ClusterStats { clusters, num_clusters: n, mean_subpaths, shadowing_db })
}

fn residual_std(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let slope = if sxx > 0.0 {
        x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / sxx
    } else {
        0.0
    };
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - my - slope * (a - mx)).powi(2)).sum();
    (ssr / (n - 2.0)).sqrt()
}
