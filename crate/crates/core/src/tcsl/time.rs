use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};
use crate::types::PowerDelayProfile;
use crate::units::db_to_linear;

/// Minimum inter-cluster void interval, ns.
pub const DEFAULT_VOID_NS: f64 = 25.0;
/// A bin is occupied when it clears the noise floor by this much.
pub const DEFAULT_OCCUPANCY_SNR_DB: f64 = 5.0;

// absorbs rounding in bin-count × bin-width products at the boundary
const GAP_EPS_NS: f64 = 1e-9;

/// A group of arrivals with similar delays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeCluster {
    pub start_ns: f64,
    pub end_ns: f64,
    /// Bin indices (PDP input) or path indices (delay input), ascending.
    pub members: Vec<usize>,
    pub power_mw: f64,
    /// Delay of the cluster's first arrival relative to the first arrival of
    /// the whole profile.
    pub excess_delay_ns: f64,
}

/// Indices of bins at or above `noise · 10^(snr/10)` with non-zero power.
pub fn occupied_bins(pdp: &PowerDelayProfile, occupancy_snr_db: f64) -> Vec<usize> {
    let thr = pdp.noise_floor_mw() * db_to_linear(occupancy_snr_db);
    (0..pdp.len())
        .filter(|&i| pdp.powers()[i] > 0.0 && pdp.powers()[i] >= thr)
        .collect()
}

/// Splits the occupied bins of a PDP into time clusters.
///
/// Consecutive occupied bins `i < j` start a new cluster when the silence
/// between them, `(j − i − 1)·bin_width`, is at least `void_ns`.
pub fn partition_time_clusters(pdp: &PowerDelayProfile, void_ns: f64) -> Result<Vec<TimeCluster>> {
    partition_time_clusters_with(pdp, void_ns, DEFAULT_OCCUPANCY_SNR_DB)
}

/// [`partition_time_clusters`] with an explicit occupancy threshold.
pub fn partition_time_clusters_with(
    pdp: &PowerDelayProfile,
    void_ns: f64,
    occupancy_snr_db: f64,
) -> Result<Vec<TimeCluster>> {
    check_void(void_ns)?;
    let occ = occupied_bins(pdp, occupancy_snr_db);
    if occ.is_empty() {
        return Err(ChannelError::EmptyResult("no occupied delay bin".into()));
    }
    let bw = pdp.bin_width_ns();
    let splits = |a: usize, b: usize| (b - a - 1) as f64 * bw + GAP_EPS_NS >= void_ns;
    Ok(build(&occ, splits, |i| pdp.delay_ns(i), |i| pdp.powers()[i]))
}

/// Splits delay-sorted impulses into time clusters; a new cluster starts
/// when the delay difference to the previous impulse is at least `void_ns`.
/// Members are indices into the input.
pub fn partition_delays(delays_ns: &[f64], powers_mw: &[f64], void_ns: f64) -> Result<Vec<TimeCluster>> {
    check_void(void_ns)?;
    if delays_ns.len() != powers_mw.len() {
        return Err(ChannelError::invalid("delay and power sequences differ in length"));
    }
    if delays_ns.is_empty() {
        return Err(ChannelError::EmptyResult("no impulses".into()));
    }
    if delays_ns.windows(2).any(|w| w[1] < w[0]) {
        return Err(ChannelError::invalid("delays must be sorted"));
    }
    let idx: Vec<usize> = (0..delays_ns.len()).collect();
    let splits = |a: usize, b: usize| delays_ns[b] - delays_ns[a] + GAP_EPS_NS >= void_ns;
    Ok(build(&idx, splits, |i| delays_ns[i], |i| powers_mw[i]))
}

fn check_void(void_ns: f64) -> Result<()> {
    if void_ns.is_finite() && void_ns > 0.0 {
        Ok(())
    } else {
        Err(ChannelError::invalid("void interval must be > 0"))
    }
}

fn build(
    items: &[usize],
    splits: impl Fn(usize, usize) -> bool,
    delay: impl Fn(usize) -> f64,
    power: impl Fn(usize) -> f64,
) -> Vec<TimeCluster> {
    let origin = delay(items[0]);
    let mut out: Vec<TimeCluster> = Vec::new();
    let mut cur: Vec<usize> = vec![items[0]];
    let close = |members: Vec<usize>, out: &mut Vec<TimeCluster>| {
        let start = delay(members[0]);
        out.push(TimeCluster {
            start_ns: start,
            end_ns: delay(*members.last().expect("non-empty")),
            power_mw: members.iter().map(|&i| power(i)).sum(),
            excess_delay_ns: start - origin,
            members,
        });
    };
    for w in items.windows(2) {
        if splits(w[0], w[1]) {
            close(std::mem::take(&mut cur), &mut out);
        }
        cur.push(w[1]);
    }
    close(cur, &mut out);
    out
}
