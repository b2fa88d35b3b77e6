//! File formats: measured power delay profiles and angular spectra, scenario
//! parameter files, generated impulse responses and ensemble directories,
//! and the shipped reference tables.
//!
//! Data files are comma-delimited text behind a versioned magic line and
//! `# key = value` header fields. Powers are stored in dBm and converted to
//! linear mW on load.

mod cir;
mod ensemble;
mod pas;
mod pdp;
mod reference;
mod scenario;
pub(crate) mod text;

pub use cir::CirFile;
pub use ensemble::{
    angle_power_table, delay_power_table, read_ensemble, write_ensemble, Manifest, ANGLE_POWER_NAME,
    DELAY_POWER_NAME, MANIFEST_NAME,
};
pub use pas::PasFile;
pub use pdp::{PdpFile, Polarization};
pub use reference::{CorrelationReference, KpmReference, LargeScaleReference, MeanStd, ReferenceTables};
pub use scenario::{resolve_scenario, ScenarioFile, SCENARIO_ENV};
