//! Re-extracts statistics from a generated ensemble and compares them with
//! the scenario it was generated from.

use mmwchan::generate::{generate_ensemble, GeneratorConfig};
use mmwchan::io::ScenarioFile;
use mmwchan::validate::{validate_ensemble, EnsembleInfo, Tolerances};

fn main() -> mmwchan::Result<()> {
    let params = ScenarioFile::builtin().get("73GHz-NLOS")?.clone();
    let mut config = GeneratorConfig::new("73GHz-NLOS", params.clone(), 9);
    config.min_subpath_power_db = None;
    let ensemble = generate_ensemble(&config, 2000)?;
    let report = validate_ensemble(
        &ensemble,
        &EnsembleInfo::from_config(&config),
        &config.scenario_name,
        &params,
        &Tolerances::default(),
    )?;
    print!("{}", report.to_text());
    Ok(())
}
