//! Domain value types. All of them are immutable after construction and
//! validate their invariants in their constructors.

use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};
use crate::units::wrap_azimuth;

/// Default delay-bin width of the sounder, ns.
pub const DEFAULT_BIN_WIDTH_NS: f64 = 2.5;

/// Time-binned received power (linear mW).
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDelayProfile {
    bin_width_ns: f64,
    powers_mw: Vec<f64>,
    noise_floor_mw: f64,
}

impl PowerDelayProfile {
    pub fn new(bin_width_ns: f64, powers_mw: Vec<f64>, noise_floor_mw: f64) -> Result<Self> {
        if !(bin_width_ns > 0.0 && bin_width_ns.is_finite()) {
            return Err(ChannelError::invalid("bin width must be positive"));
        }
        if powers_mw.is_empty() {
            return Err(ChannelError::invalid("power delay profile has no bins"));
        }
        if powers_mw.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(ChannelError::invalid("bin powers must be finite and non-negative"));
        }
        if !(noise_floor_mw.is_finite() && noise_floor_mw >= 0.0) {
            return Err(ChannelError::invalid("noise floor must be finite and non-negative"));
        }
        Ok(Self { bin_width_ns, powers_mw, noise_floor_mw })
    }

    pub fn bin_width_ns(&self) -> f64 {
        self.bin_width_ns
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers_mw
    }

    pub fn noise_floor_mw(&self) -> f64 {
        self.noise_floor_mw
    }

    pub fn len(&self) -> usize {
        self.powers_mw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers_mw.is_empty()
    }

    /// Delay of bin `i` relative to bin 0.
    pub fn delay_ns(&self, i: usize) -> f64 {
        i as f64 * self.bin_width_ns
    }

    pub fn total_power(&self) -> f64 {
        self.powers_mw.iter().sum()
    }
}

/// Which end of the link an angular quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AngleDomain {
    #[serde(rename = "AOA")]
    Aoa,
    #[serde(rename = "AOD")]
    Aod,
}

impl AngleDomain {
    pub fn as_str(self) -> &'static str {
        match self {
            AngleDomain::Aoa => "AOA",
            AngleDomain::Aod => "AOD",
        }
    }
}

impl std::str::FromStr for AngleDomain {
    type Err = ChannelError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "AOA" | "aoa" => Ok(AngleDomain::Aoa),
            "AOD" | "aod" => Ok(AngleDomain::Aod),
            other => Err(ChannelError::invalid(format!("unknown angle domain `{other}`"))),
        }
    }
}

/// Power over a regular azimuth × elevation grid.
///
/// The azimuth grid covers the full circle (`n_az · step = 360`) and wraps;
/// the elevation grid is a uniform ladder of one or more levels in degrees
/// from the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAngularSpectrum {
    azimuth_start_deg: f64,
    azimuth_step_deg: f64,
    n_azimuth: usize,
    elevations_deg: Vec<f64>,
    power_mw: Vec<f64>,
}

impl PowerAngularSpectrum {
    /// `power_mw` is row-major over (azimuth, elevation).
    pub fn new(
        azimuth_start_deg: f64,
        azimuth_step_deg: f64,
        elevations_deg: Vec<f64>,
        power_mw: Vec<f64>,
    ) -> Result<Self> {
        if !(azimuth_step_deg > 0.0 && azimuth_step_deg <= 360.0) {
            return Err(ChannelError::invalid("azimuth step must be in (0, 360]"));
        }
        let n = 360.0 / azimuth_step_deg;
        let n_azimuth = n.round() as usize;
        if (n - n_azimuth as f64).abs() > 1e-6 || n_azimuth == 0 {
            return Err(ChannelError::invalid("azimuth step must divide 360"));
        }
        if elevations_deg.is_empty() {
            return Err(ChannelError::invalid("elevation grid is empty"));
        }
        if elevations_deg.iter().any(|e| !(-90.0..=90.0).contains(e)) {
            return Err(ChannelError::invalid("elevations must lie in [-90, 90]"));
        }
        if elevations_deg.len() > 1 {
            let step = elevations_deg[1] - elevations_deg[0];
            if step <= 0.0 {
                return Err(ChannelError::invalid("elevation grid must be increasing"));
            }
            for w in elevations_deg.windows(2) {
                if ((w[1] - w[0]) - step).abs() > 1e-6 {
                    return Err(ChannelError::invalid("elevation grid step must be uniform"));
                }
            }
        }
        if power_mw.len() != n_azimuth * elevations_deg.len() {
            return Err(ChannelError::invalid(format!(
                "expected {} cells, got {}",
                n_azimuth * elevations_deg.len(),
                power_mw.len()
            )));
        }
        if power_mw.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(ChannelError::invalid("cell powers must be finite and non-negative"));
        }
        Ok(Self {
            azimuth_start_deg: wrap_azimuth(azimuth_start_deg),
            azimuth_step_deg,
            n_azimuth,
            elevations_deg,
            power_mw,
        })
    }

    pub fn n_azimuth(&self) -> usize {
        self.n_azimuth
    }

    pub fn n_elevation(&self) -> usize {
        self.elevations_deg.len()
    }

    pub fn azimuth_step_deg(&self) -> f64 {
        self.azimuth_step_deg
    }

    pub fn azimuth_start_deg(&self) -> f64 {
        self.azimuth_start_deg
    }

    pub fn azimuth_deg(&self, ia: usize) -> f64 {
        wrap_azimuth(self.azimuth_start_deg + ia as f64 * self.azimuth_step_deg)
    }

    pub fn elevations_deg(&self) -> &[f64] {
        &self.elevations_deg
    }

    pub fn power(&self, ia: usize, ie: usize) -> f64 {
        self.power_mw[ia * self.elevations_deg.len() + ie]
    }

    pub fn powers(&self) -> &[f64] {
        &self.power_mw
    }
}

/// One resolvable path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultipathComponent {
    pub delay_ns: f64,
    pub power_mw: f64,
    pub aod_azimuth_deg: f64,
    pub aod_elevation_deg: f64,
    pub aoa_azimuth_deg: f64,
    pub aoa_elevation_deg: f64,
    pub xpr_db: f64,
}

impl MultipathComponent {
    /// Checks the path invariants: delay ≥ 0, power > 0, azimuths in
    /// [0, 360), elevations in [−90, 90], XPR ≥ 0.
    pub fn validate(&self) -> Result<()> {
        let ok = self.delay_ns.is_finite()
            && self.delay_ns >= 0.0
            && self.power_mw.is_finite()
            && self.power_mw > 0.0
            && (0.0..360.0).contains(&self.aod_azimuth_deg)
            && (0.0..360.0).contains(&self.aoa_azimuth_deg)
            && (-90.0..=90.0).contains(&self.aod_elevation_deg)
            && (-90.0..=90.0).contains(&self.aoa_elevation_deg)
            && self.xpr_db.is_finite()
            && self.xpr_db >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(ChannelError::invalid(format!("path violates invariants: {self:?}")))
        }
    }
}

/// A generated spatial lobe: its center direction, intra-lobe RMS spreads and
/// the total power of the paths allocated to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeDescriptor {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub azimuth_spread_deg: f64,
    pub elevation_spread_deg: f64,
    pub power_mw: f64,
}

/// Paths sorted by delay with cluster and lobe labels, plus the spatial lobe
/// layer the paths were drawn from (empty for measured data).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelImpulseResponse {
    scenario_tag: String,
    paths: Vec<MultipathComponent>,
    cluster_ids: Vec<usize>,
    lobe_ids_aoa: Vec<usize>,
    lobe_ids_aod: Vec<usize>,
    lobes_aoa: Vec<LobeDescriptor>,
    lobes_aod: Vec<LobeDescriptor>,
}

impl ChannelImpulseResponse {
    pub fn new(
        scenario_tag: impl Into<String>,
        paths: Vec<MultipathComponent>,
        cluster_ids: Vec<usize>,
        lobe_ids_aoa: Vec<usize>,
        lobe_ids_aod: Vec<usize>,
        lobes_aoa: Vec<LobeDescriptor>,
        lobes_aod: Vec<LobeDescriptor>,
    ) -> Result<Self> {
        let n = paths.len();
        if n == 0 {
            return Err(ChannelError::invalid("impulse response has no paths"));
        }
        if cluster_ids.len() != n || lobe_ids_aoa.len() != n || lobe_ids_aod.len() != n {
            return Err(ChannelError::invalid("label vectors must have one entry per path"));
        }
        for p in &paths {
            p.validate()?;
        }
        if paths.windows(2).any(|w| w[1].delay_ns < w[0].delay_ns) {
            return Err(ChannelError::invalid("paths must be sorted by delay"));
        }
        check_contiguous(&cluster_ids, "cluster")?;
        check_lobe_labels(&lobe_ids_aoa, &lobes_aoa, "AOA")?;
        check_lobe_labels(&lobe_ids_aod, &lobes_aod, "AOD")?;
        Ok(Self {
            scenario_tag: scenario_tag.into(),
            paths,
            cluster_ids,
            lobe_ids_aoa,
            lobe_ids_aod,
            lobes_aoa,
            lobes_aod,
        })
    }

    /// A CIR without lobe layer; every path gets lobe label 0 in both domains
    /// unless labels are supplied later through [`Self::new`].
    pub fn from_paths(
        scenario_tag: impl Into<String>,
        paths: Vec<MultipathComponent>,
        cluster_ids: Vec<usize>,
    ) -> Result<Self> {
        let n = paths.len();
        Self::new(scenario_tag, paths, cluster_ids, vec![0; n], vec![0; n], vec![], vec![])
    }

    pub fn scenario_tag(&self) -> &str {
        &self.scenario_tag
    }

    pub fn paths(&self) -> &[MultipathComponent] {
        &self.paths
    }

    pub fn cluster_ids(&self) -> &[usize] {
        &self.cluster_ids
    }

    pub fn lobe_ids(&self, domain: AngleDomain) -> &[usize] {
        match domain {
            AngleDomain::Aoa => &self.lobe_ids_aoa,
            AngleDomain::Aod => &self.lobe_ids_aod,
        }
    }

    pub fn lobes(&self, domain: AngleDomain) -> &[LobeDescriptor] {
        match domain {
            AngleDomain::Aoa => &self.lobes_aoa,
            AngleDomain::Aod => &self.lobes_aod,
        }
    }

    pub fn num_clusters(&self) -> usize {
        self.cluster_ids.iter().max().map_or(0, |m| m + 1)
    }

    pub fn total_power(&self) -> f64 {
        self.paths.iter().map(|p| p.power_mw).sum()
    }
}

fn check_contiguous(labels: &[usize], what: &str) -> Result<()> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut seen = vec![false; k];
    for &l in labels {
        seen[l] = true;
    }
    if seen.iter().all(|s| *s) {
        Ok(())
    } else {
        Err(ChannelError::invalid(format!("{what} labels must be contiguous from 0")))
    }
}

fn check_lobe_labels(labels: &[usize], lobes: &[LobeDescriptor], what: &str) -> Result<()> {
    if lobes.is_empty() {
        return Ok(());
    }
    if labels.iter().any(|&l| l >= lobes.len()) {
        return Err(ChannelError::invalid(format!("{what} lobe label out of range")));
    }
    check_contiguous(labels, &format!("{what} lobe"))
}

/// LOS condition of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LosCondition {
    #[serde(rename = "LOS")]
    Los,
    #[serde(rename = "LOS-to-NLOS")]
    LosToNlos,
    #[serde(rename = "NLOS")]
    Nlos,
}

/// Time-cluster / spatial-lobe parameter set for one (frequency, LOS
/// condition) scenario. `None` marks entries that were not measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParameters {
    pub frequency_ghz: f64,
    pub los_condition: LosCondition,
    pub num_clusters_mu: f64,
    pub num_clusters_sigma: f64,
    pub num_subpaths_mu: f64,
    pub num_subpaths_sigma: f64,
    pub cluster_decay_gamma_ns: f64,
    pub subpath_decay_gamma_ns: f64,
    pub per_cluster_shadowing_db: f64,
    pub per_subpath_shadowing_db: f64,
    pub num_aod_lobes_mu: f64,
    pub num_aod_lobes_sigma: f64,
    pub num_aoa_lobes_mu: f64,
    pub num_aoa_lobes_sigma: f64,
    pub rms_lobe_asd_mu_deg: f64,
    pub rms_lobe_asd_sigma_deg: f64,
    #[serde(with = "dash_option")]
    pub rms_lobe_esd_mu_deg: Option<f64>,
    #[serde(with = "dash_option")]
    pub rms_lobe_esd_sigma_deg: Option<f64>,
    pub rms_lobe_asa_mu_deg: f64,
    pub rms_lobe_asa_sigma_deg: f64,
    pub rms_lobe_esa_mu_deg: f64,
    pub rms_lobe_esa_sigma_deg: f64,
    pub xpr_mu_db: f64,
    pub xpr_sigma_db: f64,
    #[serde(with = "dash_option")]
    pub delay_scaling_r_ds_mu: Option<f64>,
    #[serde(with = "dash_option")]
    pub delay_scaling_r_ds_sigma: Option<f64>,
    #[serde(default = "default_void")]
    pub inter_cluster_void_ns: f64,
}

fn default_void() -> f64 {
    25.0
}

impl ScenarioParameters {
    pub fn validate(&self) -> Result<()> {
        let sigmas = [
            ("num_clusters_sigma", Some(self.num_clusters_sigma)),
            ("num_subpaths_sigma", Some(self.num_subpaths_sigma)),
            ("per_cluster_shadowing_db", Some(self.per_cluster_shadowing_db)),
            ("per_subpath_shadowing_db", Some(self.per_subpath_shadowing_db)),
            ("num_aod_lobes_sigma", Some(self.num_aod_lobes_sigma)),
            ("num_aoa_lobes_sigma", Some(self.num_aoa_lobes_sigma)),
            ("rms_lobe_asd_sigma_deg", Some(self.rms_lobe_asd_sigma_deg)),
            ("rms_lobe_esd_sigma_deg", self.rms_lobe_esd_sigma_deg),
            ("rms_lobe_asa_sigma_deg", Some(self.rms_lobe_asa_sigma_deg)),
            ("rms_lobe_esa_sigma_deg", Some(self.rms_lobe_esa_sigma_deg)),
            ("xpr_sigma_db", Some(self.xpr_sigma_db)),
            ("delay_scaling_r_ds_sigma", self.delay_scaling_r_ds_sigma),
        ];
        for (name, v) in sigmas {
            if let Some(v) = v {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(ChannelError::invalid(format!("{name} must be >= 0")));
                }
            }
        }
        let counts = [
            ("num_clusters_mu", self.num_clusters_mu),
            ("num_subpaths_mu", self.num_subpaths_mu),
            ("num_aod_lobes_mu", self.num_aod_lobes_mu),
            ("num_aoa_lobes_mu", self.num_aoa_lobes_mu),
        ];
        for (name, v) in counts {
            if !(v.is_finite() && v >= 1.0) {
                return Err(ChannelError::invalid(format!("{name} must be >= 1")));
            }
        }
        let positive = [
            ("frequency_ghz", self.frequency_ghz),
            ("cluster_decay_gamma_ns", self.cluster_decay_gamma_ns),
            ("subpath_decay_gamma_ns", self.subpath_decay_gamma_ns),
            ("inter_cluster_void_ns", self.inter_cluster_void_ns),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ChannelError::invalid(format!("{name} must be > 0")));
            }
        }
        let spreads = [
            ("rms_lobe_asd_mu_deg", Some(self.rms_lobe_asd_mu_deg)),
            ("rms_lobe_esd_mu_deg", self.rms_lobe_esd_mu_deg),
            ("rms_lobe_asa_mu_deg", Some(self.rms_lobe_asa_mu_deg)),
            ("rms_lobe_esa_mu_deg", Some(self.rms_lobe_esa_mu_deg)),
        ];
        for (name, v) in spreads {
            if let Some(v) = v {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(ChannelError::invalid(format!("{name} must be >= 0")));
                }
            }
        }
        if self.rms_lobe_esd_mu_deg.is_some() != self.rms_lobe_esd_sigma_deg.is_some() {
            return Err(ChannelError::invalid("ESD mean and std must both be given or both be null"));
        }
        if !self.xpr_mu_db.is_finite() {
            return Err(ChannelError::invalid("xpr_mu_db must be finite"));
        }
        Ok(())
    }
}

/// Serde adapter for optional numbers written as `"-"` when absent.
mod dash_option {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_f64(*x),
            None => s.serialize_str("-"),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Int(i64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Some(x)),
            Raw::Int(x) => Ok(Some(x as f64)),
            Raw::Text(t) if t.trim() == "-" => Ok(None),
            Raw::Text(t) => Err(D::Error::custom(format!("expected a number or \"-\", got `{t}`"))),
        }
    }
}

/// Per-location large-scale parameters. Missing quantities are `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LspRecord {
    pub location_id: String,
    pub tr_separation_m: Option<f64>,
    pub asd_deg: Option<f64>,
    pub asa_deg: Option<f64>,
    pub zsa_deg: Option<f64>,
    pub rms_ds_ns: Option<f64>,
    pub sf_db: Option<f64>,
    pub k_factor_db: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(delay: f64) -> MultipathComponent {
        MultipathComponent {
            delay_ns: delay,
            power_mw: 1.0,
            aod_azimuth_deg: 0.0,
            aod_elevation_deg: 0.0,
            aoa_azimuth_deg: 0.0,
            aoa_elevation_deg: 0.0,
            xpr_db: 0.0,
        }
    }

    #[test]
    fn pdp_rejects_bad_input() {
        assert!(PowerDelayProfile::new(0.0, vec![1.0], 0.0).is_err());
        assert!(PowerDelayProfile::new(2.5, vec![], 0.0).is_err());
        assert!(PowerDelayProfile::new(2.5, vec![-1.0], 0.0).is_err());
        let p = PowerDelayProfile::new(2.5, vec![1.0, 2.0], 0.1).unwrap();
        assert_eq!(p.total_power(), 3.0);
        assert_eq!(p.delay_ns(4), 10.0);
    }

    #[test]
    fn pas_grid_checks() {
        assert!(PowerAngularSpectrum::new(0.0, 7.0, vec![0.0], vec![0.0; 51]).is_err());
        assert!(PowerAngularSpectrum::new(0.0, 10.0, vec![0.0, 10.0, 25.0], vec![0.0; 108]).is_err());
        let pas = PowerAngularSpectrum::new(350.0, 10.0, vec![0.0, 10.0], vec![0.0; 72]).unwrap();
        assert_eq!(pas.azimuth_deg(1), 0.0);
        assert_eq!(pas.n_azimuth(), 36);
    }

    #[test]
    fn cir_invariants() {
        let ok = ChannelImpulseResponse::from_paths("t", vec![path(0.0), path(5.0)], vec![0, 1]);
        assert!(ok.is_ok());
        assert!(ChannelImpulseResponse::from_paths("t", vec![path(5.0), path(0.0)], vec![0, 0]).is_err());
        assert!(ChannelImpulseResponse::from_paths("t", vec![path(0.0), path(5.0)], vec![0, 2]).is_err());
        let mut bad = path(0.0);
        bad.aoa_azimuth_deg = 360.0;
        assert!(ChannelImpulseResponse::from_paths("t", vec![bad], vec![0]).is_err());
    }
}
