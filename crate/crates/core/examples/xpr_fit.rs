//! Per-bin XPR from co- and cross-polarized PDPs, and the censored-Gaussian
//! fit of a sample.

use mmwchan::lsp::{fit_truncated_gaussian_xpr, xpr_per_bin};
use mmwchan::PowerDelayProfile;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> mmwchan::Result<()> {
    let vv = PowerDelayProfile::new(2.5, vec![0.0, 1e-3, 5e-4, 1e-9, 2e-4], 1e-8)?;
    let vh = PowerDelayProfile::new(2.5, vec![0.0, 1e-4, 1e-5, 1e-9, 2e-5], 1e-8)?;
    println!("per-bin XPR {:?} dB", xpr_per_bin(&vv, &vh, 5.0)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let normal = Normal::new(16.7, 8.8).expect("valid normal");
    let samples: Vec<f64> = (0..50_000).map(|_| f64::max(normal.sample(&mut rng), 0.0)).collect();
    let naive = samples.iter().sum::<f64>() / samples.len() as f64;
    let fit = fit_truncated_gaussian_xpr(&samples)?;
    println!("sample mean of max(N(16.7, 8.8), 0): {naive:.2} dB");
    println!("censored fit: μ = {:.2} dB, σ = {:.2} dB", fit.mu_db, fit.sigma_db);
    Ok(())
}
