use crate::error::{ChannelError, Result};
use crate::types::PowerDelayProfile;
use crate::units::{db_to_linear, linear_to_db, weighted_mean_std};

/// Dynamic range kept below the PDP peak before computing delay spread.
pub const DEFAULT_DS_THRESHOLD_DB: f64 = 30.0;

/// Minimum SNR of a directional multipath peak.
pub const DEFAULT_MULTIPATH_SNR_DB: f64 = 5.0;

fn bins_within(pdp: &PowerDelayProfile, threshold_db: f64) -> Result<Vec<usize>> {
    if !(threshold_db.is_finite() && threshold_db >= 0.0) {
        return Err(ChannelError::invalid("threshold must be a non-negative dB range"));
    }
    let peak = pdp.powers().iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(ChannelError::invalid("no bin above threshold: profile is all zero"));
    }
    let floor = peak * db_to_linear(-threshold_db);
    Ok((0..pdp.len())
        .filter(|&i| pdp.powers()[i] > 0.0 && pdp.powers()[i] >= floor)
        .collect())
}

/// Power-weighted RMS delay spread (ns) over bins within `threshold_db` of
/// the peak.
pub fn rms_delay_spread(pdp: &PowerDelayProfile, threshold_db: f64) -> Result<f64> {
    let bins = bins_within(pdp, threshold_db)?;
    let delays: Vec<f64> = bins.iter().map(|&i| pdp.delay_ns(i)).collect();
    let powers: Vec<f64> = bins.iter().map(|&i| pdp.powers()[i]).collect();
    Ok(weighted_mean_std(&delays, &powers).1)
}

/// Ricean K-factor in dB: strongest component over the sum of the others.
pub fn k_factor(powers: &[f64]) -> Result<f64> {
    if powers.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(ChannelError::invalid("powers must be finite and non-negative"));
    }
    let Some((imax, &pmax)) = powers.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return Err(ChannelError::invalid("no components given"));
    };
    let rest: f64 = powers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != imax)
        .map(|(_, p)| p)
        .sum();
    if rest <= 0.0 || pmax <= 0.0 {
        return Err(ChannelError::SingularKFactor);
    }
    Ok(linear_to_db(pmax / rest))
}

/// K-factor over the bins of a PDP within `threshold_db` of its peak.
pub fn k_factor_pdp(pdp: &PowerDelayProfile, threshold_db: f64) -> Result<f64> {
    let bins = bins_within(pdp, threshold_db)?;
    let powers: Vec<f64> = bins.iter().map(|&i| pdp.powers()[i]).collect();
    k_factor(&powers)
}

/// Number of local maxima at least `snr_db` above the noise floor
/// (inclusive). A plateau of equal bins counts once; bins outside the
/// profile are treated as zero power.
pub fn count_directional_multipaths(pdp: &PowerDelayProfile, snr_db: f64) -> usize {
    let p = pdp.powers();
    let threshold = pdp.noise_floor_mw() * db_to_linear(snr_db);
    let n = p.len();
    let mut count = 0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && p[j + 1] == p[i] {
            j += 1;
        }
        let left = if i == 0 { 0.0 } else { p[i - 1] };
        let right = if j + 1 == n { 0.0 } else { p[j + 1] };
        if p[i] > 0.0 && p[i] >= threshold && p[i] > left && p[i] > right {
            count += 1;
        }
        i = j + 1;
    }
    count
}
