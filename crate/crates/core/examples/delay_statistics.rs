//! RMS delay spread, K-factor and directional multipath count of a PDP.

use mmwchan::lsp::{count_directional_multipaths, k_factor, k_factor_pdp, rms_delay_spread};
use mmwchan::PowerDelayProfile;

fn main() -> mmwchan::Result<()> {
    // 2.5 ns bins: a strong first arrival and two weaker echoes
    let mut powers = vec![0.0; 120];
    powers[4] = 1.0;
    powers[5] = 0.4;
    powers[30] = 0.1;
    powers[90] = 0.02;
    let pdp = PowerDelayProfile::new(2.5, powers, 1e-6)?;

    println!("rms delay spread   {:.2} ns", rms_delay_spread(&pdp, 30.0)?);
    println!("K-factor           {:.2} dB", k_factor_pdp(&pdp, 30.0)?);
    println!("multipaths (5 dB)  {}", count_directional_multipaths(&pdp, 5.0));

    println!("K of {{9, 1}} mW      {:.4} dB", k_factor(&[9.0, 1.0])?);
    match k_factor(&[3.0]) {
        Err(e) => println!("single component   {e}"),
        Ok(k) => println!("single component   {k}"),
    }
    Ok(())
}
