//! Fits the hinge model `max(a·d + b, c)` to log10 ZSA against distance.

use mmwchan::lsp::fit_zsa_local_mean;

fn main() -> mmwchan::Result<()> {
    let (a, b, c) = (-0.006, 1.4, 0.55);
    let records: Vec<(f64, f64)> = (0..25)
        .map(|i| {
            let d = 30.0 + 7.0 * i as f64;
            // small deterministic ripple standing in for measurement noise
            let ripple = 0.02 * ((i * 7 % 5) as f64 - 2.0);
            (d, (a * d + b).max(c) + ripple)
        })
        .collect();
    let fit = fit_zsa_local_mean(&records)?;
    println!("truth  a={a} b={b} c={c}");
    println!(
        "fitted a={:.5} b={:.4} c={:.4} (rms residual {:.4}, floor identified: {})",
        fit.a, fit.b, fit.c, fit.residual_rms, fit.floor_identified
    );
    println!("knot at {:.1} m", (fit.c - fit.b) / fit.a);
    Ok(())
}
