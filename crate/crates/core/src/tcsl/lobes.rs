use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};
use crate::lsp::{circular_spread, zenith_spread};
use crate::types::{AngleDomain, PowerAngularSpectrum};
use crate::units::db_to_linear;

/// Lobe threshold relative to the spectrum peak, dB.
pub const DEFAULT_LOBE_THRESHOLD_DB: f64 = -20.0;

/// One grid cell of a lobe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LobeCell {
    pub azimuth_index: usize,
    pub elevation_index: usize,
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub power_mw: f64,
}

/// A connected region of the angular spectrum above the lobe threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialLobe {
    pub domain: AngleDomain,
    /// Cells above the global threshold (4-connected, azimuth wraps).
    pub cells: Vec<LobeCell>,
    /// Cells connected to this lobe's peak that lie within the threshold of
    /// the lobe's own peak, excluding cells of other lobes. Superset of
    /// `cells`; the RMS spreads are measured over it.
    pub footprint: Vec<LobeCell>,
    pub peak_azimuth_deg: f64,
    pub peak_elevation_deg: f64,
    pub power_mw: f64,
}

/// Spatial lobes of a spectrum: connected components of the cells with
/// power ≥ peak·10^(threshold_db/10), sorted by lobe power descending.
pub fn extract_spatial_lobes(
    pas: &PowerAngularSpectrum,
    domain: AngleDomain,
    threshold_db: f64,
) -> Result<Vec<SpatialLobe>> {
    if !(threshold_db.is_finite() && threshold_db <= 0.0) {
        return Err(ChannelError::invalid("lobe threshold must be a finite value <= 0 dB"));
    }
    let (na, ne) = (pas.n_azimuth(), pas.n_elevation());
    let peak = pas.powers().iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(ChannelError::EmptyResult("angular spectrum is all zero".into()));
    }
    let ratio = db_to_linear(threshold_db);
    let thr = peak * ratio;
    let idx = |a: usize, e: usize| a * ne + e;
    let neighbours = |a: usize, e: usize| {
        let mut v = [(0, 0); 4];
        let mut n = 0;
        let mut push = |c| {
            v[n] = c;
            n += 1;
        };
        if na > 1 {
            push(((a + 1) % na, e));
            push(((a + na - 1) % na, e));
        }
        if e + 1 < ne {
            push((a, e + 1));
        }
        if e > 0 {
            push((a, e - 1));
        }
        v.into_iter().take(n)
    };

    const NONE: u32 = u32::MAX;
    let mut label = vec![NONE; na * ne];
    let mut comps: Vec<Vec<(usize, usize)>> = Vec::new();
    for a in 0..na {
        for e in 0..ne {
            let p = pas.power(a, e);
            if label[idx(a, e)] != NONE || !(p > 0.0 && p >= thr) {
                continue;
            }
            let id = comps.len() as u32;
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([(a, e)]);
            label[idx(a, e)] = id;
            while let Some((ca, ce)) = queue.pop_front() {
                comp.push((ca, ce));
                for (xa, xe) in neighbours(ca, ce) {
                    let q = pas.power(xa, xe);
                    if label[idx(xa, xe)] == NONE && q > 0.0 && q >= thr {
                        label[idx(xa, xe)] = id;
                        queue.push_back((xa, xe));
                    }
                }
            }
            comps.push(comp);
        }
    }

    let cell = |(a, e): (usize, usize)| LobeCell {
        azimuth_index: a,
        elevation_index: e,
        azimuth_deg: pas.azimuth_deg(a),
        elevation_deg: pas.elevations_deg()[e],
        power_mw: pas.power(a, e),
    };
    // seen[i] == id + 1 marks cells already visited by lobe `id`'s footprint
    let mut seen = vec![0u32; na * ne];
    let mut lobes: Vec<SpatialLobe> = comps
        .iter()
        .enumerate()
        .map(|(id, comp)| {
            let (id, stamp) = (id as u32, id as u32 + 1);
            let &(pa, pe) = comp
                .iter()
                .max_by(|x, y| pas.power(x.0, x.1).total_cmp(&pas.power(y.0, y.1)).then(y.cmp(x)))
                .expect("non-empty component");
            let own = pas.power(pa, pe) * ratio;
            let mut foot = Vec::new();
            let mut queue = VecDeque::from([(pa, pe)]);
            seen[idx(pa, pe)] = stamp;
            while let Some((ca, ce)) = queue.pop_front() {
                foot.push(cell((ca, ce)));
                for (xa, xe) in neighbours(ca, ce) {
                    let i = idx(xa, xe);
                    let q = pas.power(xa, xe);
                    let foreign = label[i] != NONE && label[i] != id;
                    if seen[i] != stamp && !foreign && q > 0.0 && q >= own {
                        seen[i] = stamp;
                        queue.push_back((xa, xe));
                    }
                }
            }
            SpatialLobe {
                domain,
                cells: comp.iter().map(|&c| cell(c)).collect(),
                footprint: foot,
                peak_azimuth_deg: pas.azimuth_deg(pa),
                peak_elevation_deg: pas.elevations_deg()[pe],
                power_mw: comp.iter().map(|&(a, e)| pas.power(a, e)).sum(),
            }
        })
        .collect();
    lobes.sort_by(|x, y| y.power_mw.total_cmp(&x.power_mw));
    Ok(lobes)
}

/// Power-weighted RMS azimuth spread (circular) and elevation spread of a
/// lobe, in degrees, over its footprint.
pub fn lobe_rms_spreads(lobe: &SpatialLobe) -> (f64, f64) {
    let cells = if lobe.footprint.is_empty() { &lobe.cells } else { &lobe.footprint };
    let pw: Vec<f64> = cells.iter().map(|c| c.power_mw).collect();
    let az: Vec<f64> = cells.iter().map(|c| c.azimuth_deg).collect();
    let el: Vec<f64> = cells.iter().map(|c| c.elevation_deg).collect();
    let a = circular_spread(&az, &pw).expect("lobe cells carry positive power");
    let e = zenith_spread(&el, &pw).expect("lobe cells carry positive power");
    (a, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(f: impl Fn(f64, f64) -> f64) -> PowerAngularSpectrum {
        let els: Vec<f64> = (-10..=10).map(|e| e as f64).collect();
        let mut p = Vec::new();
        for a in 0..360 {
            for &e in &els {
                p.push(f(a as f64, e));
            }
        }
        PowerAngularSpectrum::new(0.0, 1.0, els, p).unwrap()
    }

    fn bump(az: f64, el: f64, c_az: f64, c_el: f64, s: f64, amp: f64) -> f64 {
        let da = crate::units::circular_difference(az, c_az);
        amp * (-0.5 * (da * da + (el - c_el).powi(2)) / (s * s)).exp()
    }

    #[test]
    fn single_cell() {
        let pas = grid(|a, e| if a == 17.0 && e == 3.0 { 2.0 } else { 0.0 });
        let lobes = extract_spatial_lobes(&pas, AngleDomain::Aoa, -10.0).unwrap();
        assert_eq!(lobes.len(), 1);
        assert_eq!(lobes[0].cells.len(), 1);
        assert_eq!(lobe_rms_spreads(&lobes[0]), (0.0, 0.0));
    }

    #[test]
    fn two_bumps_and_seam() {
        let pas = grid(|a, e| bump(a, e, 60.0, 0.0, 4.0, 1.0) + bump(a, e, 200.0, 0.0, 4.0, 0.5));
        let lobes = extract_spatial_lobes(&pas, AngleDomain::Aoa, -10.0).unwrap();
        assert_eq!(lobes.len(), 2);
        assert_eq!(lobes[0].peak_azimuth_deg, 60.0);

        let seam = grid(|a, e| bump(a, e, 0.0, 0.0, 4.0, 1.0));
        let lobes = extract_spatial_lobes(&seam, AngleDomain::Aod, -10.0).unwrap();
        assert_eq!(lobes.len(), 1);
        assert!(lobes[0].cells.iter().any(|c| c.azimuth_deg > 350.0));
        assert!(lobes[0].cells.iter().any(|c| c.azimuth_deg < 10.0));
    }

    #[test]
    fn planted_azimuth_spread() {
        let pas = PowerAngularSpectrum::new(
            0.0,
            1.0,
            vec![0.0],
            (0..360)
                .map(|a| {
                    let d = crate::units::circular_difference(a as f64, 100.0);
                    (-0.5 * d * d / 36.0).exp()
                })
                .collect(),
        )
        .unwrap();
        let lobes = extract_spatial_lobes(&pas, AngleDomain::Aoa, -60.0).unwrap();
        let (az, el) = lobe_rms_spreads(&lobes[0]);
        assert!((az - 6.0).abs() < 0.05, "{az}");
        assert_eq!(el, 0.0);
    }

    #[test]
    fn errors_and_scaling() {
        assert!(matches!(
            extract_spatial_lobes(&grid(|_, _| 0.0), AngleDomain::Aoa, -10.0),
            Err(ChannelError::EmptyResult(_))
        ));
        let f = |a: f64, e: f64| bump(a, e, 60.0, 2.0, 5.0, 1.0) + bump(a, e, 250.0, -3.0, 3.0, 0.2);
        let base = extract_spatial_lobes(&grid(f), AngleDomain::Aoa, -20.0).unwrap();
        let scaled = extract_spatial_lobes(&grid(|a, e| 1e3 * f(a, e)), AngleDomain::Aoa, -20.0).unwrap();
        assert_eq!(base.len(), scaled.len());
        for (x, y) in base.iter().zip(&scaled) {
            assert_eq!(x.cells.len(), y.cells.len());
        }
    }

    #[test]
    fn lower_threshold_grows_membership() {
        let f = |a: f64, e: f64| bump(a, e, 60.0, 2.0, 5.0, 1.0) + bump(a, e, 250.0, -3.0, 3.0, 0.05);
        let pas = grid(f);
        let n10: usize = extract_spatial_lobes(&pas, AngleDomain::Aoa, -10.0).unwrap().iter().map(|l| l.cells.len()).sum();
        let n20: usize = extract_spatial_lobes(&pas, AngleDomain::Aoa, -20.0).unwrap().iter().map(|l| l.cells.len()).sum();
        assert!(n20 >= n10);
    }
}
