use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mcd::{dist2, embed_path, McdParams, Point};
use super::partition::{Centroid, ClusterPartition};
use crate::error::{ChannelError, Result};
use crate::types::MultipathComponent;

const MAX_ITERATIONS: usize = 100;

pub(crate) fn check_paths(paths: &[MultipathComponent]) -> Result<()> {
    if paths.is_empty() {
        return Err(ChannelError::invalid("no paths to cluster"));
    }
    paths.iter().try_for_each(|p| p.validate())
}

/// KPowerMeans clustering into `k` clusters.
///
/// Initial centroids are `k` distinct paths drawn power-weighted without
/// replacement. Each iteration assigns every path to the nearest centroid in
/// MCD and recomputes centroids as power-weighted means; it stops at a fixed
/// point or after 100 iterations.
pub fn kpowermeans(
    paths: &[MultipathComponent],
    k: usize,
    params: &McdParams,
    seed: u64,
) -> Result<ClusterPartition> {
    kpowermeans_traced(paths, k, params, seed).map(|(p, _)| p)
}

/// [`kpowermeans`] that also returns the objective after every update step.
pub fn kpowermeans_traced(
    paths: &[MultipathComponent],
    k: usize,
    params: &McdParams,
    seed: u64,
) -> Result<(ClusterPartition, Vec<f64>)> {
    check_paths(paths)?;
    if k == 0 || k > paths.len() {
        return Err(ChannelError::invalid(format!(
            "cluster count {k} outside [1, {}]",
            paths.len()
        )));
    }
    let n = paths.len();
    let pts: Vec<Point> = paths.iter().map(|p| embed_path(p, params)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers: Vec<Point> = initial_indices(paths, k, &mut rng)
        .into_iter()
        .map(|i| pts[i])
        .collect();

    let mut assign = vec![usize::MAX; n];
    let mut trace = Vec::new();
    let mut centroids = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for i in 0..n {
            let best = nearest(&pts[i], &centers);
            if best != assign[i] {
                assign[i] = best;
                changed = true;
            }
        }
        fill_empty(&mut assign, &pts, &centers, paths, k);
        let mut members = vec![Vec::new(); k];
        for (i, &a) in assign.iter().enumerate() {
            members[a].push(i);
        }
        centroids = members.iter().map(|m| Centroid::of(paths, m)).collect::<Vec<_>>();
        centers = centroids.iter().map(|c| c.point(params)).collect();
        let obj: f64 = (0..n).map(|i| paths[i].power_mw * dist2(&pts[i], &centers[assign[i]])).sum();
        debug_assert!(
            trace.last().is_none_or(|&prev: &f64| obj <= prev * (1.0 + 1e-9) + 1e-12),
            "objective increased"
        );
        trace.push(obj);
        if !changed {
            break;
        }
    }
    let objective = *trace.last().expect("at least one iteration");
    Ok((
        ClusterPartition { assignments: assign, centroids, pruned: vec![false; n], objective },
        trace,
    ))
}

fn initial_indices(paths: &[MultipathComponent], k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut weights: Vec<f64> = paths.iter().map(|p| p.power_mw).collect();
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let total: f64 = weights.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = None;
        for (i, w) in weights.iter().enumerate() {
            if *w <= 0.0 {
                continue;
            }
            pick = Some(i);
            if u < *w {
                break;
            }
            u -= w;
        }
        let i = pick.expect("k <= number of paths");
        chosen.push(i);
        weights[i] = 0.0;
    }
    chosen
}

fn nearest(p: &Point, centers: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centers.iter().enumerate() {
        let d = dist2(p, c);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}

/// Gives every empty cluster the path with the largest weighted cost among
/// clusters that can spare one.
fn fill_empty(
    assign: &mut [usize],
    pts: &[Point],
    centers: &[Point],
    paths: &[MultipathComponent],
    k: usize,
) {
    loop {
        let mut sizes = vec![0usize; k];
        for &a in assign.iter() {
            sizes[a] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let donor = (0..assign.len())
            .filter(|&i| sizes[assign[i]] > 1)
            .max_by(|&i, &j| {
                let ci = paths[i].power_mw * dist2(&pts[i], &centers[assign[i]]);
                let cj = paths[j].power_mw * dist2(&pts[j], &centers[assign[j]]);
                ci.total_cmp(&cj).then(j.cmp(&i))
            })
            .expect("k <= number of paths");
        assign[donor] = empty;
    }
}
