//! Large-scale parameter extraction: angular and delay spreads, K-factor,
//! the elevation local-mean fit, cross-polarization ratio and directional
//! multipath counting.

mod correlation;
mod delay;
mod spread;
mod xpr;
mod zsa;

pub use correlation::cross_correlation;
pub use delay::{
    count_directional_multipaths, k_factor, k_factor_pdp, rms_delay_spread,
    DEFAULT_DS_THRESHOLD_DB, DEFAULT_MULTIPATH_SNR_DB,
};
pub use spread::{circular_spread, pas_global_spreads, zenith_spread, GlobalSpreads};
pub use xpr::{fit_truncated_gaussian_xpr, xpr_per_bin, XprFit, DEFAULT_XPR_MIN_SNR_DB};
pub use zsa::{fit_zsa_local_mean, ZsaFit};
