use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::text::{dbm, parse_dbm, parse_f64, read_file, write_file, Document};
use crate::error::{ChannelError, Result};
use crate::types::{AngleDomain, PowerAngularSpectrum};

const MAGIC: &str = "# mmw-pas v1";

/// A power angular spectrum with its header.
///
/// Elevation is measured from the horizon, positive upwards. Every
/// (azimuth, elevation) cell of the grid must appear exactly once; azimuths
/// start at the smallest listed value and advance by `azimuth_step_deg`
/// around the full circle.
#[derive(Debug, Clone, PartialEq)]
pub struct PasFile {
    pub location_id: String,
    pub domain: AngleDomain,
    pub pas: PowerAngularSpectrum,
}

fn grid_index(value: f64, start: f64, step: f64, n: usize) -> Option<usize> {
    let k = (value - start) / step;
    let r = k.round();
    ((k - r).abs() < 1e-6 && r >= 0.0 && (r as usize) < n).then_some(r as usize)
}

impl PasFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let doc = Document::parse(text, source, MAGIC)?;
        let step = doc.header_f64("azimuth_step_deg")?;
        let (el_line, levels) = doc.required("elevation_levels")?;
        let elevations = levels
            .split(',')
            .map(|v| parse_f64(source, el_line, "elevation_levels", v.trim()))
            .collect::<Result<Vec<f64>>>()?;
        let location_id = doc.required("location_id")?.1.to_string();
        let (dl, dv) = doc.required("domain")?;
        let domain: AngleDomain = dv.parse().map_err(|e: ChannelError| ChannelError::parse(source, dl, e.to_string()))?;
        let sec = doc.section(None)?;
        doc.expect_columns(sec, &["azimuth_deg", "elevation_deg", "power_dbm"])?;
        if !(step > 0.0 && step <= 360.0) {
            return Err(ChannelError::parse(source, doc.required("azimuth_step_deg")?.0, "azimuth step must be in (0, 360]"));
        }
        let n_az = (360.0 / step).round() as usize;
        let mut cells = Vec::with_capacity(sec.rows.len());
        for (n, row) in &sec.rows {
            let az = parse_f64(source, *n, "azimuth_deg", &row[0])?;
            let el = parse_f64(source, *n, "elevation_deg", &row[1])?;
            let p = parse_dbm(source, *n, "power_dbm", &row[2])?;
            cells.push((*n, az, el, p));
        }
        let start = cells.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        if !start.is_finite() {
            return Err(ChannelError::parse(source, sec.line, "no cells"));
        }
        let mut power = vec![0.0; n_az * elevations.len()];
        let mut seen = HashSet::new();
        for &(n, az, el, p) in &cells {
            let a = grid_index(az, start, step, n_az)
                .ok_or_else(|| ChannelError::parse(source, n, format!("azimuth {az} is off the {step}° grid")))?;
            let e = elevations
                .iter()
                .position(|l| (l - el).abs() < 1e-6)
                .ok_or_else(|| ChannelError::parse(source, n, format!("elevation {el} is not a declared level")))?;
            if !seen.insert((a, e)) {
                return Err(ChannelError::parse(source, n, format!("duplicate cell ({az}, {el})")));
            }
            power[a * elevations.len() + e] = p;
        }
        if seen.len() != power.len() {
            return Err(ChannelError::parse(
                source,
                sec.line,
                format!("incomplete grid: {} of {} cells present", seen.len(), power.len()),
            ));
        }
        let pas = PowerAngularSpectrum::new(start, step, elevations, power)
            .map_err(|e| ChannelError::parse(source, sec.line, e.to_string()))?;
        Ok(Self { location_id, domain, pas })
    }

    pub fn to_text(&self) -> String {
        let p = &self.pas;
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "# azimuth_step_deg = {}", p.azimuth_step_deg());
        let levels: Vec<String> = p.elevations_deg().iter().map(|e| e.to_string()).collect();
        let _ = writeln!(s, "# elevation_levels = {}", levels.join(","));
        let _ = writeln!(s, "# location_id = {}", self.location_id);
        let _ = writeln!(s, "# domain = {}", self.domain.as_str());
        let _ = writeln!(s, "azimuth_deg,elevation_deg,power_dbm");
        for a in 0..p.n_azimuth() {
            for (e, el) in p.elevations_deg().iter().enumerate() {
                let _ = writeln!(s, "{},{},{}", p.azimuth_deg(a), el, dbm(p.power(a, e)));
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
    use crate::units::db_to_linear;

    fn sample() -> String {
        let mut s = "# mmw-pas v1\n# azimuth_step_deg = 90\n# elevation_levels = -10,0\n# location_id = RX1\n\
                     # domain = AOA\nazimuth_deg,elevation_deg,power_dbm\n"
            .to_string();
        for az in [0, 90, 180, 270] {
            for el in [-10, 0] {
                s += &format!("{az},{el},-{}\n", 50 + az / 10 - el);
            }
        }
        s
    }

    #[test]
    fn parses_complete_grid() {
        let f = PasFile::parse(&sample(), "s").unwrap();
        assert_eq!(f.pas.n_azimuth(), 4);
        assert_eq!(f.domain, AngleDomain::Aoa);
        assert!((f.pas.power(1, 1) - db_to_linear(-59.0)).abs() < 1e-15);
    }

    #[test]
    fn rejects_incomplete_and_duplicate() {
        let text = sample();
        let missing: String = text.lines().filter(|l| !l.starts_with("180,0")).map(|l| format!("{l}\n")).collect();
        assert!(PasFile::parse(&missing, "s").unwrap_err().to_string().contains("incomplete"));
        let dup = text.replace("180,0,", "90,0,");
        assert!(PasFile::parse(&dup, "s").unwrap_err().to_string().contains("duplicate"));
        let off = text.replace("180,0,", "185,0,");
        assert!(PasFile::parse(&off, "s").unwrap_err().to_string().contains("grid"));
    }

    proptest::proptest! {
        #[test]
        fn round_trip(
            n_az in proptest::sample::select(vec![1usize, 4, 8, 36, 72]),
            n_el in 1usize..4,
            start in 0.0f64..5.0,
            seed in proptest::collection::vec(-100.0f64..-20.0, 288),
        ) {
            let step = 360.0 / n_az as f64;
            let els: Vec<f64> = (0..n_el).map(|i| -10.0 + 10.0 * i as f64).collect();
            let power: Vec<f64> = (0..n_az * n_el).map(|i| db_to_linear(seed[i % seed.len()])).collect();
            let f = PasFile {
                location_id: "X".into(),
                domain: AngleDomain::Aod,
                pas: PowerAngularSpectrum::new(start, step, els, power.clone()).unwrap(),
            };
            let g = PasFile::parse(&f.to_text(), "rt").unwrap();
            proptest::prop_assert_eq!(g.domain, f.domain);
            proptest::prop_assert_eq!(g.pas.n_azimuth(), n_az);
            proptest::prop_assert_eq!(g.pas.elevations_deg(), f.pas.elevations_deg());
            proptest::prop_assert!((g.pas.azimuth_start_deg() - f.pas.azimuth_start_deg()).abs() < 1e-9);
            for (a, b) in g.pas.powers().iter().zip(&power) {
                proptest::prop_assert!((a - b).abs() <= 1e-12 * b);
            }
        }
    }
}
