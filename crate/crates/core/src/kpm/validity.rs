use serde::{Deserialize, Serialize};

use super::mcd::{dist2, embed_path, McdParams, Point};
use super::partition::{Centroid, ClusterPartition};
use crate::error::{ChannelError, Result};
use crate::types::MultipathComponent;

// squared MCDs below this are rounding noise from renormalized directions
pub(crate) const DEGENERATE_MCD2: f64 = 1e-24;

/// A validity-index value; degenerate partitions yield an explicit infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IndexScore {
    Finite(f64),
    Infinite,
}

impl IndexScore {
    pub fn value(self) -> f64 {
        match self {
            IndexScore::Finite(v) => v,
            IndexScore::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for IndexScore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IndexScore::Finite(v) => write!(f, "{v:.6}"),
            IndexScore::Infinite => write!(f, "inf"),
        }
    }
}

struct Retained {
    pts: Vec<Point>,
    labels: Vec<usize>,
    all: Vec<usize>,
}

fn retained(partition: &ClusterPartition, paths: &[MultipathComponent], params: &McdParams) -> Result<Retained> {
    if partition.assignments.len() != paths.len() || partition.pruned.len() != paths.len() {
        return Err(ChannelError::invalid("partition does not match the path set"));
    }
    let all: Vec<usize> = (0..paths.len()).filter(|&i| !partition.pruned[i]).collect();
    Ok(Retained {
        pts: all.iter().map(|&i| embed_path(&paths[i], params)).collect(),
        labels: all.iter().map(|&i| partition.assignments[i]).collect(),
        all,
    })
}

/// Caliński-Harabasz index `(tr(B)/(K−1)) / (tr(W)/(L−K))` with MCD
/// distances; higher is better.
///
/// `tr(B) = Σ_k L_k·MCD(c_k, c̄)²`, `tr(W) = Σ_k Σ_{j∈k} MCD(x_j, c_k)²`, where
/// `c̄` is the global centroid of the retained paths.
pub fn ch_index(partition: &ClusterPartition, paths: &[MultipathComponent], params: &McdParams) -> Result<IndexScore> {
    let k = partition.k();
    let r = retained(partition, paths, params)?;
    let l = r.all.len();
    if k < 2 {
        return Err(ChannelError::UndefinedIndex(
            "Calinski-Harabasz is undefined for K=1 (zero between-cluster degrees of freedom)".into(),
        ));
    }
    if k >= l {
        return Err(ChannelError::UndefinedIndex(format!(
            "Calinski-Harabasz is undefined for K={k} with L={l} paths (zero within-cluster degrees of freedom)"
        )));
    }
    let centers: Vec<Point> = partition.centroids.iter().map(|c| c.point(params)).collect();
    let global = Centroid::of(paths, &r.all).point(params);
    let mut counts = vec![0usize; k];
    let mut tr_w = 0.0;
    for (p, &lab) in r.pts.iter().zip(&r.labels) {
        counts[lab] += 1;
        tr_w += dist2(p, &centers[lab]);
    }
    let tr_b: f64 = (0..k).map(|c| counts[c] as f64 * dist2(&centers[c], &global)).sum();
    if tr_w <= DEGENERATE_MCD2 * l as f64 {
        return Ok(IndexScore::Infinite);
    }
    Ok(IndexScore::Finite((tr_b / (k - 1) as f64) / (tr_w / (l - k) as f64)))
}

/// Power-weighted mean MCD of each cluster's retained members to its
/// centroid.
pub(crate) fn scatter(partition: &ClusterPartition, paths: &[MultipathComponent], params: &McdParams) -> Vec<f64> {
    let k = partition.k();
    let centers: Vec<Point> = partition.centroids.iter().map(|c| c.point(params)).collect();
    let mut num = vec![0.0; k];
    let mut den = vec![0.0; k];
    for (i, p) in paths.iter().enumerate() {
        if partition.pruned[i] {
            continue;
        }
        let c = partition.assignments[i];
        num[c] += p.power_mw * dist2(&embed_path(p, params), &centers[c]).sqrt();
        den[c] += p.power_mw;
    }
    num.iter().zip(&den).map(|(n, d)| if *d > 0.0 { n / d } else { 0.0 }).collect()
}

/// Davies-Bouldin index with MCD; lower is better. Coincident centroids make
/// the index diverge and yield [`IndexScore::Infinite`].
pub fn db_index(partition: &ClusterPartition, paths: &[MultipathComponent], params: &McdParams) -> Result<IndexScore> {
    let k = partition.k();
    retained(partition, paths, params)?;
    if k < 2 {
        return Err(ChannelError::UndefinedIndex("Davies-Bouldin needs at least 2 clusters".into()));
    }
    let s = scatter(partition, paths, params);
    let centers: Vec<Point> = partition.centroids.iter().map(|c| c.point(params)).collect();
    let mut total = 0.0;
    for i in 0..k {
        let mut worst: f64 = 0.0;
        for j in 0..k {
            if i == j {
                continue;
            }
            let m = dist2(&centers[i], &centers[j]).sqrt();
            if m * m <= DEGENERATE_MCD2 {
                return Ok(IndexScore::Infinite);
            }
            worst = worst.max((s[i] + s[j]) / m);
        }
        total += worst;
    }
    Ok(IndexScore::Finite(total / k as f64))
}
