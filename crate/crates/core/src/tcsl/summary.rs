use serde::{Deserialize, Serialize};

use super::lobes::{extract_spatial_lobes, lobe_rms_spreads, DEFAULT_LOBE_THRESHOLD_DB};
use super::render::render_lobe_spectrum;
use super::time::{partition_delays, partition_time_clusters_with, DEFAULT_OCCUPANCY_SNR_DB, DEFAULT_VOID_NS};
use crate::error::{ChannelError, Result};
use crate::types::{AngleDomain, ChannelImpulseResponse, PowerAngularSpectrum, PowerDelayProfile};
use crate::units::{linear_to_db, mean_std};

/// Extraction settings shared by PDP, spectrum and impulse-response input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcslConfig {
    pub void_ns: f64,
    pub occupancy_snr_db: f64,
    pub lobe_threshold_db: f64,
}

impl Default for TcslConfig {
    fn default() -> Self {
        Self {
            void_ns: DEFAULT_VOID_NS,
            occupancy_snr_db: DEFAULT_OCCUPANCY_SNR_DB,
            lobe_threshold_db: DEFAULT_LOBE_THRESHOLD_DB,
        }
    }
}

/// A time cluster reduced to what the summary needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterObservation {
    pub excess_delay_ns: f64,
    pub power_mw: f64,
    /// (delay offset from the cluster's first arrival, power) per subpath.
    pub subpaths: Vec<(f64, f64)>,
}

/// RMS spreads and power of one extracted lobe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeObservation {
    pub azimuth_spread_deg: f64,
    pub elevation_spread_deg: f64,
    pub power_mw: f64,
}

/// Everything extracted from one location or realization.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TcslObservation {
    pub clusters: Vec<ClusterObservation>,
    pub aoa_lobes: Option<Vec<LobeObservation>>,
    pub aod_lobes: Option<Vec<LobeObservation>>,
}

/// Sample mean, (n−1) standard deviation and sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl Moments {
    pub(crate) fn of(v: &[f64]) -> Option<Self> {
        if v.is_empty() {
            return None;
        }
        let (mean, std) = mean_std(v);
        Some(Self { mean, std, n: v.len() })
    }
}

/// Decay constant and shadowing from a grouped log-linear fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub decay_ns: f64,
    pub shadowing_db: f64,
    pub n: usize,
}

/// Ensemble statistics of time clusters and spatial lobes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcslSummary {
    pub num_observations: usize,
    pub num_clusters: Option<Moments>,
    /// Subpaths per cluster.
    pub num_subpaths: Option<Moments>,
    pub cluster_decay: Option<DecayFit>,
    pub subpath_decay: Option<DecayFit>,
    pub num_aod_lobes: Option<Moments>,
    pub num_aoa_lobes: Option<Moments>,
    pub rms_lobe_asd_deg: Option<Moments>,
    pub rms_lobe_esd_deg: Option<Moments>,
    pub rms_lobe_asa_deg: Option<Moments>,
    pub rms_lobe_esa_deg: Option<Moments>,
}

/// Time clusters of one omnidirectional PDP; each occupied bin is a subpath.
pub fn observe_pdp(pdp: &PowerDelayProfile, cfg: &TcslConfig) -> Result<Vec<ClusterObservation>> {
    let clusters = partition_time_clusters_with(pdp, cfg.void_ns, cfg.occupancy_snr_db)?;
    Ok(clusters
        .into_iter()
        .map(|c| ClusterObservation {
            excess_delay_ns: c.excess_delay_ns,
            power_mw: c.power_mw,
            subpaths: c.members.iter().map(|&i| (pdp.delay_ns(i) - c.start_ns, pdp.powers()[i])).collect(),
        })
        .collect())
}

/// Lobes of one angular spectrum.
pub fn observe_pas(pas: &PowerAngularSpectrum, domain: AngleDomain, cfg: &TcslConfig) -> Result<Vec<LobeObservation>> {
    Ok(extract_spatial_lobes(pas, domain, cfg.lobe_threshold_db)?
        .iter()
        .map(|l| {
            let (a, e) = lobe_rms_spreads(l);
            LobeObservation { azimuth_spread_deg: a, elevation_spread_deg: e, power_mw: l.power_mw }
        })
        .collect())
}

/// Re-extracts time clusters from the path delays (ignoring the generator's
/// labels) and spatial lobes from the rendered lobe layer, when present.
pub fn observe_cir(cir: &ChannelImpulseResponse, cfg: &TcslConfig) -> Result<TcslObservation> {
    let delays: Vec<f64> = cir.paths().iter().map(|p| p.delay_ns).collect();
    let powers: Vec<f64> = cir.paths().iter().map(|p| p.power_mw).collect();
    let clusters = partition_delays(&delays, &powers, cfg.void_ns)?
        .into_iter()
        .map(|c| ClusterObservation {
            excess_delay_ns: c.excess_delay_ns,
            power_mw: c.power_mw,
            subpaths: c.members.iter().map(|&i| (delays[i] - c.start_ns, powers[i])).collect(),
        })
        .collect();
    let lobes = |d: AngleDomain| -> Result<Option<Vec<LobeObservation>>> {
        if cir.lobes(d).is_empty() {
            return Ok(None);
        }
        let pas = render_lobe_spectrum(cir.lobes(d))?;
        observe_pas(&pas, d, cfg).map(Some)
    };
    Ok(TcslObservation { clusters, aoa_lobes: lobes(AngleDomain::Aoa)?, aod_lobes: lobes(AngleDomain::Aod)? })
}

/// Fixed-effects fit of `10·log10(P) = α_g − (10/ln10)·x/τ` over groups `g`;
/// returns τ and the residual std. `None` when the pooled within-group
/// delay variance is zero or the fitted slope does not decay.
pub fn fit_decay(groups: &[Vec<(f64, f64)>]) -> Option<DecayFit> {
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut n = 0usize;
    let mut used = 0usize;
    let centred: Vec<Vec<(f64, f64)>> = groups
        .iter()
        .filter(|g| g.len() >= 2)
        .map(|g| {
            let m = g.len() as f64;
            let y: Vec<f64> = g.iter().map(|&(_, p)| linear_to_db(p)).collect();
            let mx = g.iter().map(|v| v.0).sum::<f64>() / m;
            let my = y.iter().sum::<f64>() / m;
            g.iter().zip(&y).map(|(v, yy)| (v.0 - mx, yy - my)).collect()
        })
        .collect();
    for g in &centred {
        for &(dx, dy) in g {
            sxx += dx * dx;
            sxy += dx * dy;
        }
        n += g.len();
        used += 1;
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    if slope >= 0.0 {
        return None;
    }
    let ssr: f64 = centred.iter().flatten().map(|&(dx, dy)| (dy - slope * dx).powi(2)).sum();
    let dof = n.saturating_sub(used + 1).max(1) as f64;
    Some(DecayFit {
        decay_ns: -10.0 / (std::f64::consts::LN_10 * slope),
        shadowing_db: (ssr / dof).sqrt(),
        n,
    })
}

/// Summary statistics over a set of observations.
pub fn summarize(obs: &[TcslObservation]) -> Result<TcslSummary> {
    if obs.is_empty() {
        return Err(ChannelError::invalid("no observations to summarize"));
    }
    let timed: Vec<&TcslObservation> = obs.iter().filter(|o| !o.clusters.is_empty()).collect();
    let counts: Vec<f64> = timed.iter().map(|o| o.clusters.len() as f64).collect();
    let subs: Vec<f64> = timed.iter().flat_map(|o| o.clusters.iter().map(|c| c.subpaths.len() as f64)).collect();
    let cluster_groups: Vec<Vec<(f64, f64)>> = timed
        .iter()
        .map(|o| o.clusters.iter().map(|c| (c.excess_delay_ns, c.power_mw)).collect())
        .collect();
    let subpath_groups: Vec<Vec<(f64, f64)>> =
        timed.iter().flat_map(|o| o.clusters.iter().map(|c| c.subpaths.clone())).collect();

    let lobe_stats = |pick: fn(&TcslObservation) -> &Option<Vec<LobeObservation>>| {
        let sets: Vec<&Vec<LobeObservation>> = obs.iter().filter_map(|o| pick(o).as_ref()).collect();
        let n: Vec<f64> = sets.iter().map(|s| s.len() as f64).collect();
        let az: Vec<f64> = sets.iter().flat_map(|s| s.iter().map(|l| l.azimuth_spread_deg)).collect();
        let el: Vec<f64> = sets.iter().flat_map(|s| s.iter().map(|l| l.elevation_spread_deg)).collect();
        (Moments::of(&n), Moments::of(&az), Moments::of(&el))
    };
    let (num_aoa, asa, esa) = lobe_stats(|o| &o.aoa_lobes);
    let (num_aod, asd, esd) = lobe_stats(|o| &o.aod_lobes);

    Ok(TcslSummary {
        num_observations: obs.len(),
        num_clusters: Moments::of(&counts),
        num_subpaths: Moments::of(&subs),
        cluster_decay: fit_decay(&cluster_groups),
        subpath_decay: fit_decay(&subpath_groups),
        num_aod_lobes: num_aod,
        num_aoa_lobes: num_aoa,
        rms_lobe_asd_deg: asd,
        rms_lobe_esd_deg: esd,
        rms_lobe_asa_deg: asa,
        rms_lobe_esa_deg: esa,
    })
}

/// Summary over measured omnidirectional PDPs and angular spectra. The
/// spectra are pooled per domain; they need not pair with the PDPs.
pub fn tcsl_summary(
    pdps: &[PowerDelayProfile],
    pass: &[(AngleDomain, PowerAngularSpectrum)],
    cfg: &TcslConfig,
) -> Result<TcslSummary> {
    if pdps.is_empty() && pass.is_empty() {
        return Err(ChannelError::invalid("no profiles or spectra given"));
    }
    let mut obs = Vec::new();
    for p in pdps {
        obs.push(TcslObservation { clusters: observe_pdp(p, cfg)?, ..Default::default() });
    }
    for (d, pas) in pass {
        let lobes = Some(observe_pas(pas, *d, cfg)?);
        obs.push(match d {
            AngleDomain::Aoa => TcslObservation { aoa_lobes: lobes, ..Default::default() },
            AngleDomain::Aod => TcslObservation { aod_lobes: lobes, ..Default::default() },
        });
    }
    summarize(&obs)
}
