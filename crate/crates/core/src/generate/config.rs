use serde::{Deserialize, Serialize};

use super::counts::CountModel;
use crate::error::{ChannelError, Result};
use crate::types::ScenarioParameters;

/// Everything that determines a generated ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub scenario_name: String,
    pub scenario: ScenarioParameters,
    pub seed: u64,
    pub count_model: CountModel,
    /// Paths weaker than the strongest path by more than this are dropped;
    /// `None` keeps every path.
    pub min_subpath_power_db: Option<f64>,
    /// Mean of the exponential excess gap added to the void interval between
    /// the last arrival of one cluster and the first of the next.
    pub inter_cluster_exponential_mean_ns: f64,
    pub aod_elevation_center_deg: f64,
    pub aoa_elevation_center_deg: f64,
    /// Jitter of stratified lobe azimuth centers as a fraction of a sector.
    pub lobe_center_jitter: f64,
}

impl GeneratorConfig {
    pub fn new(scenario_name: impl Into<String>, scenario: ScenarioParameters, seed: u64) -> Self {
        Self {
            scenario_name: scenario_name.into(),
            scenario,
            seed,
            count_model: CountModel::RoundedGaussian,
            min_subpath_power_db: Some(30.0),
            inter_cluster_exponential_mean_ns: 17.0,
            aod_elevation_center_deg: 0.0,
            aoa_elevation_center_deg: 0.0,
            lobe_center_jitter: 0.5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if let Some(db) = self.min_subpath_power_db {
            if !(db.is_finite() && db > 0.0) {
                return Err(ChannelError::invalid("min_subpath_power_db must be > 0"));
            }
        }
        if !(self.inter_cluster_exponential_mean_ns.is_finite() && self.inter_cluster_exponential_mean_ns >= 0.0) {
            return Err(ChannelError::invalid("inter-cluster exponential mean must be >= 0"));
        }
        for e in [self.aod_elevation_center_deg, self.aoa_elevation_center_deg] {
            if !(-90.0..=90.0).contains(&e) {
                return Err(ChannelError::invalid("elevation centers must lie in [-90, 90]"));
            }
        }
        if !(0.0..=1.0).contains(&self.lobe_center_jitter) {
            return Err(ChannelError::invalid("lobe center jitter must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Short SHA-256 digest of the canonical JSON form.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&json))[..16].to_string()
    }
}
