use super::mcd::{dist2, embed_path, McdParams};
use super::partition::{relabel, ClusterPartition};
use super::validity::scatter;
use crate::types::MultipathComponent;

/// Default merge factor of [`combine_validate`].
pub const DEFAULT_COMBINE_T: f64 = 2.0;
/// Default distance quantile of [`shape_pruning`].
pub const DEFAULT_PRUNE_S: f64 = 0.9;
/// Default retained power fraction of [`shape_pruning`].
pub const DEFAULT_PRUNE_P: f64 = 0.9;

/// Merges cluster pairs whose centroid MCD is below `t` times the mean of
/// their intra-cluster spreads (power-weighted mean MCD to centroid).
/// The pair with the smallest distance-to-threshold ratio is merged first
/// and the test is repeated until no pair qualifies. Coincident centroids
/// always merge.
pub fn combine_validate(
    partition: &ClusterPartition,
    paths: &[MultipathComponent],
    params: &McdParams,
    t: f64,
) -> ClusterPartition {
    let mut part = partition.clone();
    loop {
        let k = part.k();
        if k < 2 {
            return part;
        }
        let s = scatter(&part, paths, params);
        let centers: Vec<_> = part.centroids.iter().map(|c| c.point(params)).collect();
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..k {
            for j in i + 1..k {
                let d = dist2(&centers[i], &centers[j]).sqrt();
                let limit = t * 0.5 * (s[i] + s[j]);
                let ratio = if d * d <= super::validity::DEGENERATE_MCD2 { 0.0 } else if limit > 0.0 { d / limit } else { f64::INFINITY };
                if ratio < 1.0 && best.is_none_or(|b| ratio < b.0) {
                    best = Some((ratio, i, j));
                }
            }
        }
        let Some((_, i, j)) = best else {
            return part;
        };
        let mut labels = part.assignments.clone();
        for l in labels.iter_mut() {
            if *l == j {
                *l = i;
            }
        }
        relabel(&mut labels);
        part = ClusterPartition::from_labels(paths, labels, part.pruned.clone(), params);
    }
}

/// Flags outliers without removing them.
///
/// Within each cluster the strongest paths are kept until they hold at least
/// a fraction `p` of the cluster power; everything else is flagged. Of the
/// kept paths, those farther from the centroid than the `s`-quantile
/// (nearest-rank) of their MCDs are flagged as well. Centroids are then
/// recomputed from the retained paths.
pub fn shape_pruning(
    partition: &ClusterPartition,
    paths: &[MultipathComponent],
    params: &McdParams,
    s: f64,
    p: f64,
) -> ClusterPartition {
    let mut pruned = partition.pruned.clone();
    for c in 0..partition.k() {
        let mut members = partition.members(c);
        if members.is_empty() {
            continue;
        }
        members.sort_by(|&a, &b| paths[b].power_mw.total_cmp(&paths[a].power_mw).then(a.cmp(&b)));
        let total: f64 = members.iter().map(|&i| paths[i].power_mw).sum();
        let mut cum = 0.0;
        let mut keep = Vec::new();
        for &i in &members {
            if !keep.is_empty() && cum >= p * total {
                pruned[i] = true;
            } else {
                cum += paths[i].power_mw;
                keep.push(i);
            }
        }
        let center = partition.centroids[c].point(params);
        let dist: Vec<f64> = keep.iter().map(|&i| dist2(&embed_path(&paths[i], params), &center)).collect();
        let mut sorted = dist.clone();
        sorted.sort_by(f64::total_cmp);
        let rank = ((s * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
        let q = sorted[rank - 1];
        for (&i, &d) in keep.iter().zip(&dist) {
            if d > q {
                pruned[i] = true;
            }
        }
    }
    ClusterPartition::from_labels(paths, partition.assignments.clone(), pruned, params)
}
