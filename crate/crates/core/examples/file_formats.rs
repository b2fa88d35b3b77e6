//! Writes and reads back the PDP, angular-spectrum, impulse-response and
//! scenario file formats.

use mmwchan::generate::{Generator, GeneratorConfig};
use mmwchan::io::{CirFile, PasFile, PdpFile, Polarization, ScenarioFile};
use mmwchan::{AngleDomain, PowerAngularSpectrum, PowerDelayProfile};

fn main() -> mmwchan::Result<()> {
    let dir = std::env::temp_dir().join("mmwchan-example-files");
    std::fs::create_dir_all(&dir).expect("temp dir");

    let pdp = PdpFile {
        location_id: "RX07".into(),
        frequency_ghz: 28.0,
        polarization: Polarization::Vv,
        pdp: PowerDelayProfile::new(2.5, vec![0.0, 1e-6, 3e-7, 0.0, 0.0, 1e-8], 1e-11)?,
    };
    pdp.write(dir.join("pdp.txt"))?;
    print!("{}", pdp.to_text());
    assert_eq!(PdpFile::read(dir.join("pdp.txt"))?.location_id, "RX07");

    let mut cells = vec![0.0; 36 * 2];
    cells[0] = 1e-6;
    cells[3] = 2e-7;
    let pas = PasFile {
        location_id: "RX07".into(),
        domain: AngleDomain::Aoa,
        pas: PowerAngularSpectrum::new(0.0, 10.0, vec![0.0, 10.0], cells)?,
    };
    pas.write(dir.join("pas.txt"))?;
    println!("angular spectrum: {} lines", pas.to_text().lines().count());

    let scenarios = ScenarioFile::builtin();
    let config = GeneratorConfig::new("28GHz-LOS", scenarios.get("28GHz-LOS")?.clone(), 1);
    let cir = CirFile { index: Some(0), seed: Some(1), config_hash: Some(config.hash()), cir: Generator::new(config)?.realization(0)? };
    cir.write(dir.join("cir.txt"))?;
    let back = CirFile::read(dir.join("cir.txt"))?;
    println!("impulse response: {} paths read back", back.cir.paths().len());

    scenarios.write(dir.join("scenarios.toml"))?;
    let reread = ScenarioFile::read(dir.join("scenarios.toml"))?;
    println!("scenarios: {:?}", reread.sections.keys().collect::<Vec<_>>());
    Ok(())
}
