//! Circular azimuth spread, zenith spread and global spreads of a spectrum.

use mmwchan::lsp::{circular_spread, pas_global_spreads, zenith_spread};
use mmwchan::PowerAngularSpectrum;

fn main() -> mmwchan::Result<()> {
    // two equal paths straddling north: the spread ignores the 0/360 seam
    println!("spread of 355° and 5°    {:.3}°", circular_spread(&[355.0, 5.0], &[1.0, 1.0])?);
    println!("spread of 0° and 90°     {:.3}°", circular_spread(&[0.0, 90.0], &[1.0, 1.0])?);
    println!("zenith spread            {:.3}°", zenith_spread(&[-2.0, 0.0, 6.0], &[1.0, 0.5, 0.25])?);

    // 10° azimuth steps, three elevation rows
    let elevations = vec![-10.0, 0.0, 10.0];
    let mut cells = vec![0.0; 36 * 3];
    cells[3 * 3 + 1] = 1.0;
    cells[4 * 3 + 1] = 0.5;
    cells[4 * 3 + 2] = 0.25;
    cells[20 * 3 + 1] = 0.0005;
    let pas = PowerAngularSpectrum::new(0.0, 10.0, elevations, cells)?;
    let g = pas_global_spreads(&pas, 30.0)?;
    println!("spectrum: azimuth {:.2}°, zenith {:.2}° (cells within 30 dB of the peak)", g.azimuth_deg, g.zenith_deg);
    Ok(())
}
