use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};

const BUILTIN: &str = include_str!("../../../../data/reference_tables.toml");

/// `(mean, standard deviation)`.
pub type MeanStd = [f64; 2];

/// Omnidirectional large-scale statistics of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LargeScaleReference {
    pub ds_median_ns: f64,
    pub ds_mean_ns: f64,
    pub log_ds: MeanStd,
    pub asd_median_deg: f64,
    pub asd_mean_deg: f64,
    pub log_asd: MeanStd,
    pub asa_median_deg: f64,
    pub asa_mean_deg: f64,
    pub log_asa: MeanStd,
    pub zsa_median_deg: f64,
    pub zsa_mean_deg: f64,
    pub log_zsa: MeanStd,
    /// `(a, b, c)` of the elevation local-mean fit.
    pub zsa_fit: [f64; 3],
    pub k_factor_db: MeanStd,
    pub delay_scaling_r_ds: MeanStd,
}

/// Measured LSP cross-correlations keyed `"A-B"` with names from
/// [`crate::validate::LSP_NAMES`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationReference {
    pub reproducible: bool,
    pub coefficients: BTreeMap<String, f64>,
}

impl CorrelationReference {
    /// Coefficient between two parameters in either order.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        self.coefficients.get(&format!("{a}-{b}")).or_else(|| self.coefficients.get(&format!("{b}-{a}"))).copied()
    }
}

/// KPowerMeans cluster statistics of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KpmReference {
    pub num_clusters: MeanStd,
    pub num_subpaths: MeanStd,
    pub cluster_asd_deg: MeanStd,
    pub cluster_asa_deg: MeanStd,
    pub cluster_zsd_deg: Option<MeanStd>,
    pub cluster_zsa_deg: MeanStd,
    pub per_cluster_shadowing_db: f64,
}

/// Measured statistics shipped with the crate for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceTables {
    pub format: String,
    pub large_scale: BTreeMap<String, LargeScaleReference>,
    pub correlation: BTreeMap<String, CorrelationReference>,
    pub kpowermeans: BTreeMap<String, KpmReference>,
    pub directional_multipaths: BTreeMap<String, MeanStd>,
    pub xpr: BTreeMap<String, MeanStd>,
}

impl ReferenceTables {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(1, |s| text[..s.start.min(text.len())].lines().count().max(1));
            ChannelError::parse(source, line, e.message().to_string())
        })
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN, "builtin reference tables").expect("shipped reference tables are valid")
    }
}
