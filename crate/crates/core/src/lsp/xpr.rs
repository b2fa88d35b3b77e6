use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};
use crate::types::PowerDelayProfile;
use crate::units::{db_to_linear, linear_to_db, normal_cdf, normal_pdf};

/// Both polarizations must clear their noise floor by this much.
pub const DEFAULT_XPR_MIN_SNR_DB: f64 = 5.0;

const MIN_FIT_SAMPLES: usize = 30;
const ALPHA_LO: f64 = -8.0;
const ALPHA_HI: f64 = 8.0;

/// Pre-truncation parameters of the XPR model `max(N(μ, σ²), 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XprFit {
    pub mu_db: f64,
    pub sigma_db: f64,
}

/// Per-bin `10·log10(P_VV/P_VH)` over bins where both polarizations exceed
/// their own noise floor by at least `min_snr_db`.
pub fn xpr_per_bin(
    vv: &PowerDelayProfile,
    vh: &PowerDelayProfile,
    min_snr_db: f64,
) -> Result<Vec<f64>> {
    if vv.len() != vh.len() {
        return Err(ChannelError::invalid("VV and VH profiles differ in length"));
    }
    if (vv.bin_width_ns() - vh.bin_width_ns()).abs() > 1e-12 {
        return Err(ChannelError::invalid("VV and VH profiles differ in bin width"));
    }
    let snr = db_to_linear(min_snr_db);
    let (tv, th) = (vv.noise_floor_mw() * snr, vh.noise_floor_mw() * snr);
    let out: Vec<f64> = vv
        .powers()
        .iter()
        .zip(vh.powers())
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && **a >= tv && **b >= th)
        .map(|(a, b)| linear_to_db(a / b))
        .collect();
    if out.is_empty() {
        return Err(ChannelError::EmptyResult("no bin clears the SNR threshold in both polarizations".into()));
    }
    Ok(out)
}

/// Method-of-moments fit of `max(X, 0)`, `X ~ N(μ, σ²)`, returning (μ, σ).
///
/// With α = μ/σ the first two raw moments of the censored variable are
/// `m1 = σ(αΦ(α) + φ(α))` and `m2 = σ²((α²+1)Φ(α) + αφ(α))`, so
/// `m1²/m2` depends on α alone and is inverted by bisection. When α is large
/// the censoring is inactive and the plain (1/n) moments are returned.
pub fn fit_truncated_gaussian_xpr(samples: &[f64]) -> Result<XprFit> {
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(ChannelError::invalid(format!(
            "need at least {MIN_FIT_SAMPLES} XPR samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(ChannelError::invalid("XPR samples must be finite and >= 0"));
    }
    if samples.iter().all(|s| *s == samples[0]) {
        return Err(ChannelError::invalid("all XPR samples are identical"));
    }
    let n = samples.len() as f64;
    let m1 = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|s| s * s).sum::<f64>() / n;
    let target = m1 * m1 / m2;

    if target >= ratio(ALPHA_HI) {
        let var = samples.iter().map(|s| (s - m1).powi(2)).sum::<f64>() / n;
        return Ok(XprFit { mu_db: m1, sigma_db: var.sqrt() });
    }
    let (mut lo, mut hi) = (ALPHA_LO, ALPHA_HI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let sigma = m1 / (alpha * normal_cdf(alpha) + normal_pdf(alpha));
    Ok(XprFit { mu_db: alpha * sigma, sigma_db: sigma })
}

fn ratio(alpha: f64) -> f64 {
    let (cdf, pdf) = (normal_cdf(alpha), normal_pdf(alpha));
    let a = alpha * cdf + pdf;
    a * a / ((alpha * alpha + 1.0) * cdf + alpha * pdf)
}
