use serde::{Deserialize, Serialize};

use super::mcd::{embed, McdParams, Point};
use crate::types::MultipathComponent;
use crate::units::unit_vector;

/// Cluster centroid: power-weighted mean delay and renormalized
/// power-weighted mean direction in each angle domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Centroid {
    pub delay_ns: f64,
    pub aod: [f64; 3],
    pub aoa: [f64; 3],
}

impl Centroid {
    /// Centroid of the paths at `members` (must be non-empty).
    pub fn of(paths: &[MultipathComponent], members: &[usize]) -> Self {
        let mut total = 0.0;
        let mut delay = 0.0;
        let mut aod = [0.0; 3];
        let mut aoa = [0.0; 3];
        let mut strongest = members[0];
        for &i in members {
            let p = &paths[i];
            total += p.power_mw;
            delay += p.power_mw * p.delay_ns;
            let (d, a) = directions(p);
            for j in 0..3 {
                aod[j] += p.power_mw * d[j];
                aoa[j] += p.power_mw * a[j];
            }
            if p.power_mw > paths[strongest].power_mw {
                strongest = i;
            }
        }
        let (fd, fa) = directions(&paths[strongest]);
        Centroid {
            delay_ns: delay / total,
            aod: normalize_or(aod, fd),
            aoa: normalize_or(aoa, fa),
        }
    }

    pub(crate) fn point(&self, params: &McdParams) -> Point {
        embed(self.delay_ns, self.aod, self.aoa, params)
    }

    /// Centroid direction as (azimuth, elevation) in degrees.
    pub fn aoa_angles(&self) -> (f64, f64) {
        to_angles(self.aoa)
    }

    pub fn aod_angles(&self) -> (f64, f64) {
        to_angles(self.aod)
    }
}

fn directions(p: &MultipathComponent) -> ([f64; 3], [f64; 3]) {
    (
        unit_vector(p.aod_azimuth_deg, p.aod_elevation_deg),
        unit_vector(p.aoa_azimuth_deg, p.aoa_elevation_deg),
    )
}

fn normalize_or(v: [f64; 3], fallback: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n > 1e-12 {
        [v[0] / n, v[1] / n, v[2] / n]
    } else {
        fallback
    }
}

fn to_angles(u: [f64; 3]) -> (f64, f64) {
    let az = crate::units::wrap_azimuth(u[1].atan2(u[0]).to_degrees());
    (az, u[2].clamp(-1.0, 1.0).asin().to_degrees())
}

/// Assignment of paths to clusters.
///
/// Pruned paths keep their cluster label but are excluded from centroids,
/// validity indices and statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterPartition {
    pub assignments: Vec<usize>,
    pub centroids: Vec<Centroid>,
    pub pruned: Vec<bool>,
    /// Σ power · MCD² of retained paths to their centroids.
    pub objective: f64,
}

impl ClusterPartition {
    /// Builds a partition from labels, computing centroids and objective.
    /// Labels must be contiguous from 0 and every cluster must keep at least
    /// one retained path.
    pub fn from_labels(
        paths: &[MultipathComponent],
        assignments: Vec<usize>,
        pruned: Vec<bool>,
        params: &McdParams,
    ) -> Self {
        let k = assignments.iter().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); k];
        for (i, &a) in assignments.iter().enumerate() {
            if !pruned[i] {
                members[a].push(i);
            }
        }
        let centroids: Vec<Centroid> = members.iter().map(|m| Centroid::of(paths, m)).collect();
        let mut part = ClusterPartition { assignments, centroids, pruned, objective: 0.0 };
        part.objective = part.compute_objective(paths, params);
        part
    }

    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// Retained member indices of cluster `c`.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == c && !self.pruned[i])
            .collect()
    }

    pub fn num_retained(&self) -> usize {
        self.pruned.iter().filter(|p| !**p).count()
    }

    pub(crate) fn compute_objective(&self, paths: &[MultipathComponent], params: &McdParams) -> f64 {
        let cps: Vec<Point> = self.centroids.iter().map(|c| c.point(params)).collect();
        paths
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.pruned[*i])
            .map(|(i, p)| {
                p.power_mw * super::mcd::dist2(&super::mcd::embed_path(p, params), &cps[self.assignments[i]])
            })
            .sum()
    }
}

/// Relabels to contiguous 0-based labels in order of first appearance.
pub(crate) fn relabel(labels: &mut [usize]) {
    let mut map = std::collections::BTreeMap::new();
    let mut next = 0;
    for l in labels.iter_mut() {
        let v = *map.entry(*l).or_insert_with(|| {
            next += 1;
            next - 1
        });
        *l = v;
    }
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings differ in length");
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let c2 = |n: u64| (n * n.saturating_sub(1)) as f64 / 2.0;
    let sum_cells: f64 = table.iter().flatten().map(|&n| c2(n)).sum();
    let sum_a: f64 = table.iter().map(|r| c2(r.iter().sum())).sum();
    let sum_b: f64 = (0..kb).map(|j| c2(table.iter().map(|r| r[j]).sum())).sum();
    let total = c2(a.len() as u64);
    let expected = sum_a * sum_b / total;
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        return 1.0;
    }
    (sum_cells - expected) / (max - expected)
}
