//! Millimeter-wave channel statistics and time-cluster / spatial-lobe (TCSL)
//! impulse-response generation.
//!
//! * [`lsp`]: large-scale parameters (angular and delay spreads, K-factor,
//!   XPR, elevation local-mean fit, directional multipath counts).
//! * [`kpm`]: KPowerMeans joint delay-angle clustering with validity indices.
//! * [`tcsl`]: time clusters from PDPs and spatial lobes from angular spectra.
//! * [`generate`]: stochastic impulse-response ensembles from scenario tables.
//! * [`validate`]: closed-loop comparison of ensembles against a scenario.
//! * [`io`]: file formats for profiles, spectra, scenarios and ensembles.
//! * [`cli`]: the `mmwchan` command-line front end.

pub mod cli;
pub mod error;
pub mod generate;
pub mod io;
pub mod kpm;
pub mod lsp;
pub mod seeding;
pub mod tcsl;
pub mod types;
pub mod units;
pub mod validate;

pub use error::{ChannelError, Result};
pub use types::*;

/// Toolkit version recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
