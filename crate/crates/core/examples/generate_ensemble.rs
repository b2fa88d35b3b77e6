//! Generates impulse responses for a built-in scenario and writes them as an
//! ensemble directory.

use mmwchan::generate::{Generator, GeneratorConfig};
use mmwchan::io::{write_ensemble, ScenarioFile};
use mmwchan::AngleDomain;

fn main() -> mmwchan::Result<()> {
    let scenarios = ScenarioFile::builtin();
    let params = scenarios.get("28GHz-NLOS")?.clone();
    let mut config = GeneratorConfig::new("28GHz-NLOS", params, 2024);
    config.min_subpath_power_db = None;
    let generator = Generator::new(config.clone())?;

    let cir = generator.realization(0)?;
    println!("realization 0: {} paths in {} clusters", cir.paths().len(), cir.num_clusters());
    for p in cir.paths().iter().take(5) {
        println!(
            "  {:7.2} ns {:8.2} dB  AOD {:6.1}°  AOA {:6.1}°  XPR {:5.1} dB",
            p.delay_ns,
            10.0 * p.power_mw.log10(),
            p.aod_azimuth_deg,
            p.aoa_azimuth_deg,
            p.xpr_db
        );
    }
    println!("  {} AOD lobes, {} AOA lobes", cir.lobes(AngleDomain::Aod).len(), cir.lobes(AngleDomain::Aoa).len());

    let ensemble = generator.ensemble(100)?;
    let dir = std::env::temp_dir().join("mmwchan-example-ensemble");
    let manifest = write_ensemble(&dir, &config, &ensemble)?;
    println!("wrote {} files to {} (config {})", manifest.count, dir.display(), manifest.config_hash);
    Ok(())
}
