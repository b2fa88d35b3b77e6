//! Shared reader for the versioned delimited-text formats.
//!
//! A document starts with a magic line (`# mmw-<kind> v1`), followed by
//! `# key = value` header lines, then one or more sections. A section is an
//! optional `[name]` line, a column-name line and comma-separated rows.
//! Other `#` lines and blank lines are ignored.

use std::collections::BTreeMap;

use crate::error::{ChannelError, Result};

pub(crate) struct Section {
    pub name: Option<String>,
    pub line: usize,
    pub columns: Vec<String>,
    pub rows: Vec<(usize, Vec<String>)>,
}

pub(crate) struct Document {
    pub source: String,
    pub header: BTreeMap<String, (usize, String)>,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn parse(text: &str, source: &str, magic: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let first = lines.by_ref().find(|(_, l)| !l.is_empty());
        match first {
            Some((_, l)) if l == magic => {}
            Some((n, l)) => return Err(ChannelError::parse(source, n, format!("expected '{magic}', found '{l}'"))),
            None => return Err(ChannelError::parse(source, 1, "empty file")),
        }
        let mut header = BTreeMap::new();
        let mut sections: Vec<Section> = Vec::new();
        let mut pending_name: Option<(usize, String)> = None;
        for (n, l) in lines {
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix('#') {
                if sections.is_empty() && pending_name.is_none() {
                    if let Some((k, v)) = rest.split_once('=') {
                        let key = k.trim().to_string();
                        if header.insert(key.clone(), (n, v.trim().to_string())).is_some() {
                            return Err(ChannelError::parse(source, n, format!("duplicate header field '{key}'")));
                        }
                    }
                }
                continue;
            }
            if l.starts_with('[') && l.ends_with(']') {
                if let Some((pn, _)) = pending_name {
                    return Err(ChannelError::parse(source, pn, "section has no column line"));
                }
                pending_name = Some((n, l[1..l.len() - 1].trim().to_string()));
                continue;
            }
            let fields: Vec<String> = l.split(',').map(|f| f.trim().to_string()).collect();
            let starts_section = pending_name.is_some() || sections.is_empty();
            if starts_section {
                let (line, name) = match pending_name.take() {
                    Some((pn, name)) => (pn, Some(name)),
                    None => (n, None),
                };
                sections.push(Section { name, line, columns: fields, rows: Vec::new() });
                continue;
            }
            let sec = sections.last_mut().expect("section exists");
            if fields.len() != sec.columns.len() {
                return Err(ChannelError::parse(
                    source,
                    n,
                    format!("expected {} fields, found {}", sec.columns.len(), fields.len()),
                ));
            }
            sec.rows.push((n, fields));
        }
        if let Some((pn, _)) = pending_name {
            return Err(ChannelError::parse(source, pn, "section has no column line"));
        }
        Ok(Self { source: source.to_string(), header, sections })
    }

    pub fn required(&self, key: &str) -> Result<(usize, &str)> {
        self.header
            .get(key)
            .map(|(n, v)| (*n, v.as_str()))
            .ok_or_else(|| self.missing_header(key))
    }

    pub fn optional(&self, key: &str) -> Option<&str> {
        self.header.get(key).map(|(_, v)| v.as_str())
    }

    fn missing_header(&self, key: &str) -> ChannelError {
        if let Some((stem, _)) = unit_split(key) {
            if let Some(other) = self.header.keys().find(|k| unit_split(k).is_some_and(|(s, _)| s == stem)) {
                return ChannelError::parse(
                    &self.source,
                    self.header[other].0,
                    format!("unit mismatch: header '{other}' found where '{key}' is required"),
                );
            }
        }
        ChannelError::parse(&self.source, 1, format!("missing header field '{key}'"))
    }

    pub fn header_f64(&self, key: &str) -> Result<f64> {
        let (n, v) = self.required(key)?;
        parse_f64(&self.source, n, key, v)
    }

    pub fn section(&self, name: Option<&str>) -> Result<&Section> {
        self.sections.iter().find(|s| s.name.as_deref() == name).ok_or_else(|| {
            let what = name.map_or("data".to_string(), |n| format!("[{n}]"));
            ChannelError::parse(&self.source, 1, format!("missing {what} section"))
        })
    }

    /// Checks a section's column names, reporting unit mismatches explicitly.
    pub fn expect_columns(&self, sec: &Section, expected: &[&str]) -> Result<()> {
        if sec.columns.len() != expected.len() {
            return Err(ChannelError::parse(
                &self.source,
                sec.line,
                format!("expected columns '{}', found '{}'", expected.join(","), sec.columns.join(",")),
            ));
        }
        for (found, want) in sec.columns.iter().zip(expected) {
            if found != want {
                let msg = match (unit_split(found), unit_split(want)) {
                    (Some((a, _)), Some((b, _))) if a == b => {
                        format!("unit mismatch: column '{found}' found where '{want}' is required")
                    }
                    _ => format!("expected column '{want}', found '{found}'"),
                };
                return Err(ChannelError::parse(&self.source, sec.line, msg));
            }
        }
        Ok(())
    }
}

const UNITS: [&str; 7] = ["dbm", "mw", "w", "db", "ns", "us", "deg"];

fn unit_split(name: &str) -> Option<(&str, &str)> {
    let (stem, unit) = name.rsplit_once('_')?;
    UNITS.contains(&unit).then_some((stem, unit))
}

pub(crate) fn parse_f64(source: &str, line: usize, what: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| !x.is_nan())
        .ok_or_else(|| ChannelError::parse(source, line, format!("{what}: '{v}' is not a number")))
}

pub(crate) fn parse_usize(source: &str, line: usize, what: &str, v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|_| ChannelError::parse(source, line, format!("{what}: '{v}' is not a non-negative integer")))
}

/// dBm field to linear mW; `-inf` maps to zero.
pub(crate) fn parse_dbm(source: &str, line: usize, what: &str, v: &str) -> Result<f64> {
    let x = parse_f64(source, line, what, v)?;
    if x == f64::INFINITY {
        return Err(ChannelError::parse(source, line, format!("{what}: infinite power")));
    }
    Ok(crate::units::db_to_linear(x))
}

pub(crate) fn dbm(mw: f64) -> f64 {
    crate::units::linear_to_db(mw)
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| ChannelError::Io { path: path.display().to_string(), source })
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| ChannelError::Io { path: path.display().to_string(), source })
}
