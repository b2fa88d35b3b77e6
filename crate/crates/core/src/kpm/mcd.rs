use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};
use crate::types::MultipathComponent;
use crate::units::{unit_vector, weighted_mean_std};

/// Parameters of the multipath component distance.
///
/// `MCD² = ‖½(u_aod,i − u_aod,j)‖² + ‖½(u_aoa,i − u_aoa,j)‖² + (ζ·|Δτ|/Δτ_max · τ_std/Δτ_max)²`
/// with `u` the unit direction vectors, `Δτ_max` the delay normalization
/// and `τ_std` the delay spread of the path set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McdParams {
    pub delay_scaling_zeta: f64,
    /// Δτ_max, ns.
    pub delay_spread_norm: f64,
    /// τ_std, ns.
    pub delay_std: f64,
}

impl McdParams {
    pub fn new(delay_scaling_zeta: f64, delay_spread_norm: f64, delay_std: f64) -> Result<Self> {
        if !(delay_scaling_zeta.is_finite() && delay_scaling_zeta >= 0.0) {
            return Err(ChannelError::invalid("zeta must be >= 0"));
        }
        if !(delay_spread_norm.is_finite() && delay_spread_norm > 0.0) {
            return Err(ChannelError::invalid("delay normalization must be > 0"));
        }
        if !(delay_std.is_finite() && delay_std >= 0.0) {
            return Err(ChannelError::invalid("delay std must be >= 0"));
        }
        Ok(Self { delay_scaling_zeta, delay_spread_norm, delay_std })
    }

    /// Normalization from the path set: `Δτ_max` is the delay range and
    /// `τ_std` the power-weighted RMS delay spread.
    pub fn from_paths(paths: &[MultipathComponent], zeta: f64) -> Result<Self> {
        if paths.is_empty() {
            return Err(ChannelError::invalid("no paths"));
        }
        let delays: Vec<f64> = paths.iter().map(|p| p.delay_ns).collect();
        let powers: Vec<f64> = paths.iter().map(|p| p.power_mw).collect();
        let lo = delays.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = delays.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let range = if hi > lo { hi - lo } else { 1.0 };
        let (_, std) = weighted_mean_std(&delays, &powers);
        Self::new(zeta, range, std)
    }

    /// Factor mapping a delay in ns onto the MCD delay axis.
    pub(crate) fn delay_factor(&self) -> f64 {
        self.delay_scaling_zeta * self.delay_std / (self.delay_spread_norm * self.delay_spread_norm)
    }
}

/// A path or centroid embedded so that MCD is the Euclidean distance:
/// `[scaled delay, ½u_aod, ½u_aoa]`.
pub(crate) type Point = [f64; 7];

pub(crate) fn embed(delay_ns: f64, aod: [f64; 3], aoa: [f64; 3], params: &McdParams) -> Point {
    [
        delay_ns * params.delay_factor(),
        0.5 * aod[0],
        0.5 * aod[1],
        0.5 * aod[2],
        0.5 * aoa[0],
        0.5 * aoa[1],
        0.5 * aoa[2],
    ]
}

pub(crate) fn embed_path(p: &MultipathComponent, params: &McdParams) -> Point {
    embed(
        p.delay_ns,
        unit_vector(p.aod_azimuth_deg, p.aod_elevation_deg),
        unit_vector(p.aoa_azimuth_deg, p.aoa_elevation_deg),
        params,
    )
}

pub(crate) fn dist2(a: &Point, b: &Point) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Multipath component distance between two paths.
pub fn mcd(p1: &MultipathComponent, p2: &MultipathComponent, params: &McdParams) -> f64 {
    dist2(&embed_path(p1, params), &embed_path(p2, params)).sqrt()
}
