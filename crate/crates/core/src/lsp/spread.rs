use std::f64::consts::TAU;

use crate::error::{ChannelError, Result};
use crate::types::PowerAngularSpectrum;
use crate::units::db_to_linear;

/// Power-weighted circular RMS spread in degrees.
///
/// The spread is the minimum over all rotations Δ of the weighted standard
/// deviation of `(θ_i + Δ) mod 2π`. Between two wrap points the rotated set
/// only shifts, so its variance is constant; the minimum is therefore reached
/// at one of the `n` rotations that map some θ_k to zero. Those candidates are
/// scored with prefix sums after sorting and the winner is recomputed with a
/// two-pass variance.
pub fn circular_spread(angles_deg: &[f64], powers: &[f64]) -> Result<f64> {
    check_inputs(angles_deg, powers)?;
    let mut pts: Vec<(f64, f64)> = angles_deg
        .iter()
        .zip(powers)
        .filter(|(_, p)| **p > 0.0)
        .map(|(a, p)| (a.to_radians().rem_euclid(TAU), *p))
        .collect();
    if pts.len() == 1 {
        return Ok(0.0);
    }
    pts.sort_by(|x, y| x.0.total_cmp(&y.0));

    let n = pts.len();
    let mut c0 = vec![0.0; n + 1];
    let mut c1 = vec![0.0; n + 1];
    let mut c2 = vec![0.0; n + 1];
    for (i, (t, p)) in pts.iter().enumerate() {
        c0[i + 1] = c0[i] + p;
        c1[i + 1] = c1[i] + p * t;
        c2[i + 1] = c2[i] + p * t * t;
    }
    let total = c0[n];

    let approx: Vec<f64> = (0..n)
        .map(|k| {
            let tk = pts[k].0;
            // tail: i >= k, value θ_i − θ_k; head: i < k, value θ_i + (2π − θ_k)
            let (t0, t1, t2) = (c0[n] - c0[k], c1[n] - c1[k], c2[n] - c2[k]);
            let (h0, h1, h2) = (c0[k], c1[k], c2[k]);
            let s = TAU - tk;
            let m1 = (t1 - tk * t0) + (h1 + s * h0);
            let m2 = (t2 - 2.0 * tk * t1 + tk * tk * t0) + (h2 + 2.0 * s * h1 + s * s * h0);
            m2 / total - (m1 / total).powi(2)
        })
        .collect();

    let best = approx.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = 1e-9 * (1.0 + best.abs());
    let var = (0..n)
        .filter(|&k| approx[k] <= best + slack)
        .map(|k| exact_variance(&pts, k))
        .fold(f64::INFINITY, f64::min);
    Ok(var.max(0.0).sqrt().to_degrees())
}

/// Spread of elevation angles (degrees from the horizon, in [−90, 90]).
///
/// Uses the same rotation-minimised definition as [`circular_spread`]; for
/// data inside the elevation range it equals the weighted standard deviation.
pub fn zenith_spread(elevations_deg: &[f64], powers: &[f64]) -> Result<f64> {
    if elevations_deg.iter().any(|e| !(-90.0..=90.0).contains(e)) {
        return Err(ChannelError::invalid("elevations must lie in [-90, 90]"));
    }
    circular_spread(elevations_deg, powers)
}

fn check_inputs(angles: &[f64], powers: &[f64]) -> Result<()> {
    if angles.len() != powers.len() {
        return Err(ChannelError::invalid("angle and power sequences differ in length"));
    }
    if angles.is_empty() {
        return Err(ChannelError::invalid("no angles given"));
    }
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(ChannelError::invalid("angles must be finite"));
    }
    if powers.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(ChannelError::invalid("powers must be finite and non-negative"));
    }
    if !powers.iter().any(|p| *p > 0.0) {
        return Err(ChannelError::invalid("all powers are zero"));
    }
    Ok(())
}

fn exact_variance(pts: &[(f64, f64)], k: usize) -> f64 {
    let tk = pts[k].0;
    let rotated = |t: f64| if t >= tk { t - tk } else { t - tk + TAU };
    let total: f64 = pts.iter().map(|p| p.1).sum();
    let mean = pts.iter().map(|&(t, p)| p * rotated(t)).sum::<f64>() / total;
    pts.iter()
        .map(|&(t, p)| p * (rotated(t) - mean).powi(2))
        .sum::<f64>()
        / total
}

/// Global azimuth and zenith spreads of an angular spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalSpreads {
    pub azimuth_deg: f64,
    pub zenith_deg: f64,
}

/// Spreads over the cells of `pas` within `threshold_db` of its strongest
/// cell.
pub fn pas_global_spreads(pas: &PowerAngularSpectrum, threshold_db: f64) -> Result<GlobalSpreads> {
    if !(threshold_db.is_finite() && threshold_db >= 0.0) {
        return Err(ChannelError::invalid("threshold must be a non-negative dB range"));
    }
    let peak = pas.powers().iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(ChannelError::invalid("angular spectrum carries no power"));
    }
    let floor = peak * db_to_linear(-threshold_db);
    let (mut az, mut el, mut w) = (Vec::new(), Vec::new(), Vec::new());
    for a in 0..pas.n_azimuth() {
        for (e, &elev) in pas.elevations_deg().iter().enumerate() {
            let p = pas.power(a, e);
            if p >= floor {
                az.push(pas.azimuth_deg(a));
                el.push(elev);
                w.push(p);
            }
        }
    }
    Ok(GlobalSpreads { azimuth_deg: circular_spread(&az, &w)?, zenith_deg: zenith_spread(&el, &w)? })
}
