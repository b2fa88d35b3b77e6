use std::fmt::Write as _;
use std::path::Path;

use super::text::{dbm, parse_dbm, parse_f64, parse_usize, read_file, write_file, Document};
use crate::error::{ChannelError, Result};
use crate::types::{AngleDomain, ChannelImpulseResponse, LobeDescriptor, MultipathComponent};

const MAGIC: &str = "# mmw-cir v1";
const PATH_COLUMNS: [&str; 10] = [
    "delay_ns",
    "power_dbm",
    "aod_azimuth_deg",
    "aod_elevation_deg",
    "aoa_azimuth_deg",
    "aoa_elevation_deg",
    "xpr_db",
    "cluster_id",
    "aod_lobe_id",
    "aoa_lobe_id",
];
const LOBE_COLUMNS: [&str; 6] =
    ["domain", "azimuth_deg", "elevation_deg", "azimuth_spread_deg", "elevation_spread_deg", "power_dbm"];

/// An impulse response with the provenance of the ensemble it belongs to.
///
/// The `[paths]` section lists one row per path; `[lobes]` lists the lobe
/// layer, with lobe ids given by row order within each domain.
#[derive(Debug, Clone, PartialEq)]
pub struct CirFile {
    pub index: Option<u64>,
    pub seed: Option<u64>,
    pub config_hash: Option<String>,
    pub cir: ChannelImpulseResponse,
}

impl CirFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let doc = Document::parse(text, source, MAGIC)?;
        let scenario = doc.required("scenario")?.1.to_string();
        let opt_u64 = |key: &str| -> Result<Option<u64>> {
            match doc.header.get(key) {
                None => Ok(None),
                Some((_, v)) if v == "-" => Ok(None),
                Some((n, v)) => v
                    .parse()
                    .map(Some)
                    .map_err(|_| ChannelError::parse(source, *n, format!("{key}: '{v}' is not an integer"))),
            }
        };
        let index = opt_u64("index")?;
        let seed = opt_u64("seed")?;
        let config_hash = doc.optional("config_hash").filter(|h| *h != "-").map(str::to_string);

        let paths_sec = doc.section(Some("paths"))?;
        doc.expect_columns(paths_sec, &PATH_COLUMNS)?;
        let n = paths_sec.rows.len();
        let (mut paths, mut clusters, mut aod, mut aoa) =
            (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (line, r) in &paths_sec.rows {
            let f = |i: usize| parse_f64(source, *line, PATH_COLUMNS[i], &r[i]);
            paths.push(MultipathComponent {
                delay_ns: f(0)?,
                power_mw: parse_dbm(source, *line, "power_dbm", &r[1])?,
                aod_azimuth_deg: f(2)?,
                aod_elevation_deg: f(3)?,
                aoa_azimuth_deg: f(4)?,
                aoa_elevation_deg: f(5)?,
                xpr_db: f(6)?,
            });
            clusters.push(parse_usize(source, *line, "cluster_id", &r[7])?);
            aod.push(parse_usize(source, *line, "aod_lobe_id", &r[8])?);
            aoa.push(parse_usize(source, *line, "aoa_lobe_id", &r[9])?);
        }
        let (mut lobes_aod, mut lobes_aoa) = (Vec::new(), Vec::new());
        if let Ok(sec) = doc.section(Some("lobes")) {
            doc.expect_columns(sec, &LOBE_COLUMNS)?;
            for (line, r) in &sec.rows {
                let domain: AngleDomain =
                    r[0].parse().map_err(|e: ChannelError| ChannelError::parse(source, *line, e.to_string()))?;
                let f = |i: usize| parse_f64(source, *line, LOBE_COLUMNS[i], &r[i]);
                let lobe = LobeDescriptor {
                    azimuth_deg: f(1)?,
                    elevation_deg: f(2)?,
                    azimuth_spread_deg: f(3)?,
                    elevation_spread_deg: f(4)?,
                    power_mw: parse_dbm(source, *line, "power_dbm", &r[5])?,
                };
                match domain {
                    AngleDomain::Aod => lobes_aod.push(lobe),
                    AngleDomain::Aoa => lobes_aoa.push(lobe),
                }
            }
        }
        let cir = ChannelImpulseResponse::new(scenario, paths, clusters, aoa, aod, lobes_aoa, lobes_aod)
            .map_err(|e| ChannelError::parse(source, paths_sec.line, e.to_string()))?;
        Ok(Self { index, seed, config_hash, cir })
    }

    pub fn to_text(&self) -> String {
        let c = &self.cir;
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".to_string());
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "# version = {}", crate::VERSION);
        let _ = writeln!(s, "# scenario = {}", c.scenario_tag());
        let _ = writeln!(s, "# index = {}", opt(self.index.map(|v| v.to_string())));
        let _ = writeln!(s, "# seed = {}", opt(self.seed.map(|v| v.to_string())));
        let _ = writeln!(s, "# config_hash = {}", opt(self.config_hash.clone()));
        let _ = writeln!(s, "[paths]");
        let _ = writeln!(s, "{}", PATH_COLUMNS.join(","));
        let (aod, aoa) = (c.lobe_ids(AngleDomain::Aod), c.lobe_ids(AngleDomain::Aoa));
        for (i, p) in c.paths().iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{}",
                p.delay_ns,
                dbm(p.power_mw),
                p.aod_azimuth_deg,
                p.aod_elevation_deg,
                p.aoa_azimuth_deg,
                p.aoa_elevation_deg,
                p.xpr_db,
                c.cluster_ids()[i],
                aod[i],
                aoa[i]
            );
        }
        let _ = writeln!(s, "[lobes]");
        let _ = writeln!(s, "{}", LOBE_COLUMNS.join(","));
        for d in [AngleDomain::Aod, AngleDomain::Aoa] {
            for l in c.lobes(d) {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    d.as_str(),
                    l.azimuth_deg,
                    l.elevation_deg,
                    l.azimuth_spread_deg,
                    l.elevation_spread_deg,
                    dbm(l.power_mw)
                );
            }
        }
        s
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_file(path)?, &path.display().to_string())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{Generator, GeneratorConfig};
    use crate::io::ScenarioFile;

    #[test]
    fn generated_round_trip() {
        let sc = ScenarioFile::builtin().get("73GHz-NLOS").unwrap().clone();
        let g = Generator::new(GeneratorConfig::new("73GHz-NLOS", sc, 5)).unwrap();
        for i in 0..20 {
            let cir = g.realization(i).unwrap();
            let f = CirFile { index: Some(i), seed: Some(5), config_hash: Some("abc".into()), cir };
            let back = CirFile::parse(&f.to_text(), "rt").unwrap();
            assert_eq!(back.index, f.index);
            assert_eq!(back.config_hash, f.config_hash);
            assert_eq!(back.cir.cluster_ids(), f.cir.cluster_ids());
            assert_eq!(back.cir.lobes(AngleDomain::Aoa).len(), f.cir.lobes(AngleDomain::Aoa).len());
            for (a, b) in back.cir.paths().iter().zip(f.cir.paths()) {
                assert_eq!(a.delay_ns, b.delay_ns);
                assert_eq!(a.aoa_azimuth_deg, b.aoa_azimuth_deg);
                assert!((a.power_mw - b.power_mw).abs() <= 1e-12 * b.power_mw);
            }
        }
    }

    #[test]
    fn malformed_row_reports_line() {
        let sc = ScenarioFile::builtin().get("28GHz-NLOS").unwrap().clone();
        let cir = Generator::new(GeneratorConfig::new("x", sc, 1)).unwrap().realization(0).unwrap();
        let text = CirFile { index: None, seed: None, config_hash: None, cir }.to_text();
        let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
        lines[8].push_str(",extra");
        let e = CirFile::parse(&lines.join("\n"), "b").unwrap_err();
        assert!(matches!(e, ChannelError::Parse { line: 9, .. }), "{e}");
        lines[8] = text.lines().nth(8).unwrap().replacen(',', ",x", 1);
        let e = CirFile::parse(&lines.join("\n"), "b").unwrap_err();
        assert!(matches!(e, ChannelError::Parse { line: 9, .. }), "{e}");
    }
}
