use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::text::{dbm, parse_dbm, parse_usize, read_file, write_file, Document};
use crate::error::{ChannelError, Result};
use crate::types::PowerDelayProfile;
use crate::units::db_to_linear;

const MAGIC: &str = "# mmw-pdp v1";

/// Antenna polarization pair of a measured profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "VV")]
    Vv,
    #[serde(rename = "VH")]
    Vh,
}

impl Polarization {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::Vv => "VV",
            Polarization::Vh => "VH",
        }
    }
}

impl std::str::FromStr for Polarization {
    type Err = ChannelError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "VV" => Ok(Polarization::Vv),
            "VH" => Ok(Polarization::Vh),
            _ => Err(ChannelError::invalid(format!("unknown polarization '{s}' (expected VV or VH)"))),
        }
    }
}

/// A power delay profile with its measurement header.
///
/// On disk, bins are listed as `(bin_index, power_dbm)` with strictly
/// increasing indices; bins that are not listed hold zero power.
#[derive(Debug, Clone, PartialEq)]
pub struct PdpFile {
    pub location_id: String,
    pub frequency_ghz: f64,
    pub polarization: Polarization,
    pub pdp: PowerDelayProfile,
}

impl PdpFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let doc = Document::parse(text, source, MAGIC)?;
        let bin_width = doc.header_f64("bin_width_ns")?;
        let noise = db_to_linear(doc.header_f64("noise_floor_dbm")?);
        let location_id = doc.required("location_id")?.1.to_string();
        let frequency_ghz = doc.header_f64("frequency_ghz")?;
        let (pl, pv) = doc.required("polarization")?;
        let polarization = pv.parse().map_err(|e: ChannelError| ChannelError::parse(source, pl, e.to_string()))?;
        let sec = doc.section(None)?;
        doc.expect_columns(sec, &["bin_index", "power_dbm"])?;
        let mut powers = Vec::new();
        for (n, row) in &sec.rows {
            let idx = parse_usize(source, *n, "bin_index", &row[0])?;
            if idx < powers.len() {
                return Err(ChannelError::parse(source, *n, "bin indices must be strictly increasing"));
            }
            powers.resize(idx, 0.0);
            powers.push(parse_dbm(source, *n, "power_dbm", &row[1])?);
        }
        let pdp = PowerDelayProfile::new(bin_width, powers, noise)
            .map_err(|e| ChannelError::parse(source, sec.line, e.to_string()))?;
        Ok(Self { location_id, frequency_ghz, polarization, pdp })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "# bin_width_ns = {}", self.pdp.bin_width_ns());
        let _ = writeln!(s, "# noise_floor_dbm = {}", dbm(self.pdp.noise_floor_mw()));
        let _ = writeln!(s, "# location_id = {}", self.location_id);
        let _ = writeln!(s, "# frequency_ghz = {}", self.frequency_ghz);
        let _ = writeln!(s, "# polarization = {}", self.polarization.as_str());
        let _ = writeln!(s, "bin_index,power_dbm");
        let last = self.pdp.len() - 1;
        for (i, &p) in self.pdp.powers().iter().enumerate() {
            if p > 0.0 || i == last {
                let _ = writeln!(s, "{i},{}", dbm(p));
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
