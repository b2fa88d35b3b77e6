use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lloyd::{check_paths, kpowermeans};
use super::mcd::McdParams;
use super::partition::ClusterPartition;
use super::validity::{ch_index, db_index, IndexScore};
use crate::error::{ChannelError, Result};
use crate::seeding::derive_seed;
use crate::types::MultipathComponent;

/// Default number of random restarts per cluster count.
pub const DEFAULT_RESTARTS: usize = 50;

/// Validity scores of the best restart at one cluster count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KScore {
    pub k: usize,
    pub objective: f64,
    pub ch: IndexScore,
    pub db: IndexScore,
}

/// Outcome of the cluster-count search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSelection {
    pub k_star: usize,
    pub partition: ClusterPartition,
    pub scores: Vec<KScore>,
}

/// Runs KPowerMeans for every K in `k_range` (best of `restarts` runs by
/// objective) and picks K* maximizing Caliński-Harabasz, breaking ties by
/// the lower Davies-Bouldin index and then by the smaller K.
///
/// K = 1 is never a candidate because the CH index is undefined there; this
/// biases the search against single-cluster channels. The upper end of the
/// range is clipped to L − 1.
pub fn select_optimal_k(
    paths: &[MultipathComponent],
    k_range: std::ops::RangeInclusive<usize>,
    params: &McdParams,
    restarts: usize,
    seed: u64,
) -> Result<KSelection> {
    check_paths(paths)?;
    if *k_range.start() < 2 {
        return Err(ChannelError::invalid(
            "K=1 is excluded from the search: the Calinski-Harabasz index is undefined at K=1",
        ));
    }
    if restarts == 0 {
        return Err(ChannelError::invalid("need at least one restart"));
    }
    let hi = (*k_range.end()).min(paths.len().saturating_sub(1));
    let ks: Vec<usize> = (*k_range.start()..=hi).collect();
    if ks.is_empty() {
        return Err(ChannelError::invalid(format!(
            "empty feasible cluster range: K must lie in [2, {}] for {} paths",
            paths.len().saturating_sub(1),
            paths.len()
        )));
    }
    log::warn!("K=1 is excluded from the cluster-count search (CH undefined); single-cluster channels are reported with K>=2");

    let runs: Vec<(usize, ClusterPartition)> = ks
        .par_iter()
        .map(|&k| {
            let best = (0..restarts)
                .into_par_iter()
                .map(|r| kpowermeans(paths, k, params, derive_seed(seed, &[k as u64, r as u64])))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .reduce(|a, b| if b.objective < a.objective { b } else { a })
                .expect("restarts > 0");
            Ok((k, best))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut scores = Vec::with_capacity(runs.len());
    for (k, part) in &runs {
        scores.push(KScore {
            k: *k,
            objective: part.objective,
            ch: ch_index(part, paths, params)?,
            db: db_index(part, paths, params)?,
        });
    }
    let best = (0..scores.len())
        .min_by(|&i, &j| rank(&scores[i], &scores[j]))
        .expect("non-empty");
    Ok(KSelection {
        k_star: scores[best].k,
        partition: runs[best].1.clone(),
        scores,
    })
}

fn rank(a: &KScore, b: &KScore) -> Ordering {
    b.ch.value()
        .total_cmp(&a.ch.value())
        .then(a.db.value().total_cmp(&b.db.value()))
        .then(a.k.cmp(&b.k))
}
