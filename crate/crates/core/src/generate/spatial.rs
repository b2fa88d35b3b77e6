use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::counts::CountDistribution;
use super::Generator;
use crate::units::wrap_azimuth;

/// Smallest per-lobe RMS spread drawn, degrees.
pub const MIN_LOBE_SPREAD_DEG: f64 = 0.5;

/// A drawn spatial lobe: center direction and intra-lobe RMS spreads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeDraw {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub azimuth_spread_deg: f64,
    pub elevation_spread_deg: f64,
}

/// Departure and arrival lobes of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialLobes {
    pub aod: Vec<LobeDraw>,
    pub aoa: Vec<LobeDraw>,
}

/// Elevation-center law of a domain.
#[derive(Debug, Clone, Copy)]
enum ElevationLaw {
    Gaussian { std: f64 },
    Laplacian { scale: f64 },
    Fixed,
}

struct DomainSpec<'a> {
    count: &'a CountDistribution,
    center_el: f64,
    law: ElevationLaw,
    az_spread: (f64, f64),
    el_spread: Option<(f64, f64)>,
}

impl Generator {
    /// Draws departure and arrival lobes.
    ///
    /// Azimuth centers use a uniformly random rotation plus one jittered
    /// center per equal sector, so each center is marginally
    /// Uniform[0, 360) while lobes of one realization stay apart. Departure
    /// elevation centers are Gaussian with the RMS lobe ESD as std (fixed
    /// when ESD is unavailable); arrival elevation centers are Laplacian with
    /// the RMS lobe ESA as std. Per-lobe spreads are Normal(μ, σ) clipped at
    /// 0.5°; a missing ESD gives zero departure elevation spread.
    pub fn generate_spatial_lobes<R: Rng + ?Sized>(&self, rng: &mut R) -> SpatialLobes {
        let cfg = &self.config;
        let sc = &cfg.scenario;
        let aod = DomainSpec {
            count: &self.aod_lobes,
            center_el: cfg.aod_elevation_center_deg,
            law: match sc.rms_lobe_esd_mu_deg {
                Some(s) if s > 0.0 => ElevationLaw::Gaussian { std: s },
                _ => ElevationLaw::Fixed,
            },
            az_spread: (sc.rms_lobe_asd_mu_deg, sc.rms_lobe_asd_sigma_deg),
            el_spread: sc.rms_lobe_esd_mu_deg.zip(sc.rms_lobe_esd_sigma_deg),
        };
        let aoa = DomainSpec {
            count: &self.aoa_lobes,
            center_el: cfg.aoa_elevation_center_deg,
            law: if sc.rms_lobe_esa_mu_deg > 0.0 {
                ElevationLaw::Laplacian { scale: sc.rms_lobe_esa_mu_deg / std::f64::consts::SQRT_2 }
            } else {
                ElevationLaw::Fixed
            },
            az_spread: (sc.rms_lobe_asa_mu_deg, sc.rms_lobe_asa_sigma_deg),
            el_spread: Some((sc.rms_lobe_esa_mu_deg, sc.rms_lobe_esa_sigma_deg)),
        };
        SpatialLobes { aod: self.draw_domain(&aod, rng), aoa: self.draw_domain(&aoa, rng) }
    }

    fn draw_domain<R: Rng + ?Sized>(&self, spec: &DomainSpec<'_>, rng: &mut R) -> Vec<LobeDraw> {
        let n = spec.count.sample(rng);
        let sector = 360.0 / n as f64;
        let h = self.config.lobe_center_jitter;
        let rot: f64 = rng.random::<f64>() * 360.0;
        let mut az: Vec<f64> = (0..n)
            .map(|i| {
                let u: f64 = rng.random();
                wrap_azimuth(rot + sector * (i as f64 + 0.5 + h * (u - 0.5)))
            })
            .collect();
        az.shuffle(rng);
        az.into_iter()
            .map(|azimuth_deg| {
                let el = match spec.law {
                    ElevationLaw::Gaussian { std } => spec.center_el + std * rng.sample::<f64, _>(rand_distr::StandardNormal),
                    ElevationLaw::Laplacian { scale } => spec.center_el + laplace(scale, rng),
                    ElevationLaw::Fixed => spec.center_el,
                };
                LobeDraw {
                    azimuth_deg,
                    elevation_deg: el.clamp(-90.0, 90.0),
                    azimuth_spread_deg: clipped_normal(spec.az_spread, rng),
                    elevation_spread_deg: spec.el_spread.map_or(0.0, |s| clipped_normal(s, rng)),
                }
            })
            .collect()
    }
}

/// Zero-mean Laplacian draw by inverse CDF.
pub(crate) fn laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random::<f64>() - 0.5;
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

fn clipped_normal<R: Rng + ?Sized>((mu, sigma): (f64, f64), rng: &mut R) -> f64 {
    let x = if sigma > 0.0 { Normal::new(mu, sigma).expect("sigma > 0").sample(rng) } else { mu };
    x.max(MIN_LOBE_SPREAD_DEG)
}
