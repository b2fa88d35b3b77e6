use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{ChannelError, Result};
use crate::types::ScenarioParameters;

use super::text::{read_file, write_file};

/// Environment variable naming the default scenario file.
pub const SCENARIO_ENV: &str = "MMWCHAN_SCENARIOS";

const BUILTIN: &str = include_str!("../../../../data/scenarios.toml");

/// Named scenario sections of a TOML document. Each section holds the flat
/// [`ScenarioParameters`] fields; `"-"` marks an unavailable value.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub sections: BTreeMap<String, ScenarioParameters>,
}

impl ScenarioFile {
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let sections: BTreeMap<String, ScenarioParameters> = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(1, |s| text[..s.start.min(text.len())].lines().count().max(1));
            ChannelError::parse(source, line, e.message().to_string())
        })?;
        for (name, sc) in &sections {
            sc.validate().map_err(|e| ChannelError::invalid(format!("{source}: section '{name}': {e}")))?;
        }
        Ok(Self { sections })
    }

    /// The scenario file shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN, "builtin scenarios").expect("shipped scenario file is valid")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&read_file(path)?, &path.display().to_string())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_toml())
    }

    pub fn to_toml(&self) -> String {
        let mut s = String::from("# mmw-scenarios v1\n");
        s += &toml::to_string(&self.sections).expect("scenarios serialize");
        s
    }

    pub fn get(&self, name: &str) -> Result<&ScenarioParameters> {
        self.sections.get(name).ok_or_else(|| {
            let names: Vec<&str> = self.sections.keys().map(String::as_str).collect();
            ChannelError::invalid(format!("unknown scenario section '{name}'; available: {}", names.join(", ")))
        })
    }
}

/// Resolves `file:section`, or a bare `section` looked up in the file named
/// by [`SCENARIO_ENV`] (falling back to the shipped scenarios).
pub fn resolve_scenario(spec: &str) -> Result<(String, ScenarioParameters)> {
    let (file, section) = match spec.rsplit_once(':') {
        Some((f, s)) if !f.is_empty() => (Some(PathBuf::from(f)), s),
        _ => (std::env::var_os(SCENARIO_ENV).map(PathBuf::from), spec.trim_start_matches(':')),
    };
    let doc = match file {
        Some(f) => ScenarioFile::read(f)?,
        None => ScenarioFile::builtin(),
    };
    Ok((section.to_string(), doc.get(section)?.clone()))
}
