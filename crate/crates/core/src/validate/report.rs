use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// One compared statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub name: String,
    pub reference: f64,
    /// `None` when the statistic could not be estimated from the ensemble.
    pub estimate: Option<f64>,
    /// Absolute half-width of the acceptance band.
    pub tolerance: f64,
    pub pass: bool,
}

impl ValidationRow {
    pub fn new(name: impl Into<String>, reference: f64, estimate: Option<f64>, tolerance: f64) -> Self {
        let pass = estimate.is_some_and(|e| (e - reference).abs() <= tolerance);
        Self { name: name.into(), reference, estimate, tolerance, pass }
    }
}

/// Result of comparing an ensemble against reference statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub version: String,
    pub scenario: String,
    pub frequency_ghz: f64,
    pub sample_size: usize,
    pub seed: Option<u64>,
    pub config_hash: Option<String>,
    pub tolerance_scale: f64,
    pub rows: Vec<ValidationRow>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn failing_rows(&self) -> impl Iterator<Item = &ValidationRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mmwchan {} validation of {} ({} GHz)", self.version, self.scenario, self.frequency_ghz);
        let seed = self.seed.map_or("-".to_string(), |v| v.to_string());
        let hash = self.config_hash.as_deref().unwrap_or("-");
        let _ = writeln!(
            s,
            "n = {}, seed = {seed}, config = {hash}, tolerance scale = {:.3}",
            self.sample_size, self.tolerance_scale
        );
        let _ = writeln!(s, "{:<22} {:>10} {:>10} {:>10}  result", "statistic", "reference", "estimate", "tolerance");
        for r in &self.rows {
            let est = r.estimate.map_or("-".to_string(), |e| format!("{e:.4}"));
            let _ = writeln!(
                s,
                "{:<22} {:>10.4} {:>10} {:>10.4}  {}",
                r.name,
                r.reference,
                est,
                r.tolerance,
                if r.pass { "pass" } else { "FAIL" }
            );
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        let _ = writeln!(s, "overall: {}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}
