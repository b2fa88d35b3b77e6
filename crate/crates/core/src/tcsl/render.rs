use crate::error::Result;
use crate::types::{LobeDescriptor, PowerAngularSpectrum};
use crate::units::circular_difference;

// bumps are cut where they fall below this fraction of their 1-D peak
const KERNEL_CUTOFF: f64 = 1e-12;

/// Renders a lobe layer onto a 1° × 1° grid: azimuth 0..359 and the
/// elevation rows −90..90 that any lobe reaches. Each lobe becomes a
/// separable Gaussian bump with its azimuth and elevation spreads, normalized
/// to carry the lobe power; a zero spread collapses that axis onto the
/// nearest grid line.
pub fn render_lobe_spectrum(lobes: &[LobeDescriptor]) -> Result<PowerAngularSpectrum> {
    const NA: usize = 360;
    const NE: usize = 181;
    let bumps: Vec<(f64, Vec<(usize, f64)>, Vec<(usize, f64)>)> = lobes
        .iter()
        .map(|l| {
            let az = kernel(NA, l.azimuth_spread_deg, |i| circular_difference(i as f64, l.azimuth_deg));
            let el = kernel(NE, l.elevation_spread_deg, |i| i as f64 - 90.0 - l.elevation_deg);
            (l.power_mw, az, el)
        })
        .collect();
    let lo = bumps.iter().filter_map(|b| b.2.first().map(|x| x.0)).min().unwrap_or(90);
    let hi = bumps.iter().filter_map(|b| b.2.last().map(|x| x.0)).max().unwrap_or(90);
    let ne = hi - lo + 1;
    let mut power = vec![0.0; NA * ne];
    for (p, az_w, el_w) in &bumps {
        for &(ia, wa) in az_w {
            for &(ie, we) in el_w {
                power[ia * ne + ie - lo] += p * wa * we;
            }
        }
    }
    let els: Vec<f64> = (lo..=hi).map(|i| i as f64 - 90.0).collect();
    PowerAngularSpectrum::new(0.0, 1.0, els, power)
}

/// Normalized 1-D weights `(index, weight)` of a sampled Gaussian with the
/// given std; `offset(i)` is the signed distance of cell `i` from the center.
fn kernel(n: usize, std: f64, offset: impl Fn(usize) -> f64) -> Vec<(usize, f64)> {
    if std <= 0.0 {
        let best = (0..n)
            .min_by(|&a, &b| offset(a).abs().total_cmp(&offset(b).abs()))
            .expect("grid is non-empty");
        return vec![(best, 1.0)];
    }
    let mut w: Vec<(usize, f64)> = (0..n)
        .map(|i| (i, (-0.5 * (offset(i) / std).powi(2)).exp()))
        .filter(|(_, v)| *v > KERNEL_CUTOFF)
        .collect();
    if w.is_empty() {
        let best = (0..n)
            .min_by(|&a, &b| offset(a).abs().total_cmp(&offset(b).abs()))
            .expect("grid is non-empty");
        return vec![(best, 1.0)];
    }
    let total: f64 = w.iter().map(|x| x.1).sum();
    for x in w.iter_mut() {
        x.1 /= total;
    }
    w
}
