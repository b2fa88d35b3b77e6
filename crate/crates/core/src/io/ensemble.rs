use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cir::CirFile;
use super::text::{dbm, read_file, write_file};
use crate::error::{ChannelError, Result};
use crate::generate::GeneratorConfig;
use crate::types::{AngleDomain, ChannelImpulseResponse};
use crate::validate::EnsembleInfo;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const DELAY_POWER_NAME: &str = "delay_power.csv";
pub const ANGLE_POWER_NAME: &str = "angle_power.csv";
const FORMAT: &str = "mmw-ensemble v1";

/// Index of a generated ensemble directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub version: String,
    pub scenario: String,
    pub config_hash: String,
    pub seed: u64,
    pub count: usize,
    pub config: GeneratorConfig,
    pub files: Vec<String>,
    pub plots: Vec<String>,
}

impl Manifest {
    pub fn info(&self) -> EnsembleInfo {
        EnsembleInfo {
            scenario: self.scenario.clone(),
            frequency_ghz: self.config.scenario.frequency_ghz,
            seed: Some(self.seed),
            config_hash: Some(self.config_hash.clone()),
            power_floor_db: self.config.min_subpath_power_db,
        }
    }
}

fn cir_name(i: usize) -> String {
    format!("cir_{i:06}.txt")
}

/// Writes one CIR file per realization, the plot tables and the manifest.
pub fn write_ensemble(dir: impl AsRef<Path>, config: &GeneratorConfig, ensemble: &[ChannelImpulseResponse]) -> Result<Manifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| ChannelError::Io { path: dir.display().to_string(), source })?;
    let hash = config.hash();
    let files: Vec<String> = (0..ensemble.len()).map(cir_name).collect();
    ensemble.par_iter().enumerate().try_for_each(|(i, cir)| {
        let f = CirFile { index: Some(i as u64), seed: Some(config.seed), config_hash: Some(hash.clone()), cir: cir.clone() };
        f.write(dir.join(&files[i]))
    })?;
    let header = |kind: &str| {
        format!("# mmw-{kind} v1\n# version = {}\n# config_hash = {hash}\n# seed = {}\n", crate::VERSION, config.seed)
    };
    write_file(&dir.join(DELAY_POWER_NAME), &(header("delay-power") + &delay_power_table(ensemble)))?;
    write_file(&dir.join(ANGLE_POWER_NAME), &(header("angle-power") + &angle_power_table(ensemble)))?;
    let manifest = Manifest {
        format: FORMAT.to_string(),
        version: crate::VERSION.to_string(),
        scenario: config.scenario_name.clone(),
        config_hash: hash,
        seed: config.seed,
        count: ensemble.len(),
        config: config.clone(),
        files,
        plots: vec![DELAY_POWER_NAME.to_string(), ANGLE_POWER_NAME.to_string()],
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_file(&dir.join(MANIFEST_NAME), &json)?;
    Ok(manifest)
}

/// Loads an ensemble directory written by [`write_ensemble`].
pub fn read_ensemble(dir: impl AsRef<Path>) -> Result<(Manifest, Vec<ChannelImpulseResponse>)> {
    let dir = dir.as_ref();
    let path = dir.join(MANIFEST_NAME);
    if !path.exists() {
        return Err(ChannelError::invalid(format!("no {MANIFEST_NAME} in {}", dir.display())));
    }
    let manifest: Manifest = serde_json::from_str(&read_file(&path)?)
        .map_err(|e| ChannelError::parse(&path.display().to_string(), e.line(), e.to_string()))?;
    if manifest.format != FORMAT {
        return Err(ChannelError::invalid(format!("unsupported ensemble format '{}'", manifest.format)));
    }
    if manifest.files.len() != manifest.count || manifest.count == 0 {
        return Err(ChannelError::invalid("manifest file list does not match its count"));
    }
    if manifest.config.hash() != manifest.config_hash {
        return Err(ChannelError::invalid("manifest config hash does not match its configuration"));
    }
    let cirs = manifest
        .files
        .par_iter()
        .map(|f| {
            let c = CirFile::read(dir.join(f))?;
            if c.config_hash.as_deref() != Some(manifest.config_hash.as_str()) {
                return Err(ChannelError::invalid(format!("{f} belongs to a different configuration")));
            }
            Ok(c.cir)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((manifest, cirs))
}

/// `realization,delay_ns,power_dbm,cluster_id` rows for every path.
pub fn delay_power_table(ensemble: &[ChannelImpulseResponse]) -> String {
    let mut s = String::from("realization,delay_ns,power_dbm,cluster_id\n");
    for (r, c) in ensemble.iter().enumerate() {
        for (p, k) in c.paths().iter().zip(c.cluster_ids()) {
            let _ = writeln!(s, "{r},{},{},{k}", p.delay_ns, dbm(p.power_mw));
        }
    }
    s
}

/// `realization,domain,azimuth_deg,elevation_deg,power_dbm,lobe_id` rows for
/// every path in both domains.
pub fn angle_power_table(ensemble: &[ChannelImpulseResponse]) -> String {
    let mut s = String::from("realization,domain,azimuth_deg,elevation_deg,power_dbm,lobe_id\n");
    for (r, c) in ensemble.iter().enumerate() {
        for d in [AngleDomain::Aod, AngleDomain::Aoa] {
            for (p, l) in c.paths().iter().zip(c.lobe_ids(d)) {
                let (az, el) = match d {
                    AngleDomain::Aod => (p.aod_azimuth_deg, p.aod_elevation_deg),
                    AngleDomain::Aoa => (p.aoa_azimuth_deg, p.aoa_elevation_deg),
                };
                let _ = writeln!(s, "{r},{},{az},{el},{},{l}", d.as_str(), dbm(p.power_mw));
            }
        }
    }
    s
}
