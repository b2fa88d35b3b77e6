//! Time clusters of a PDP and spatial lobes of a rendered angular spectrum.

use mmwchan::tcsl::{extract_spatial_lobes, lobe_rms_spreads, partition_time_clusters, render_lobe_spectrum};
use mmwchan::{AngleDomain, LobeDescriptor, PowerDelayProfile};

fn main() -> mmwchan::Result<()> {
    let mut powers = vec![0.0; 80];
    for (i, p) in [(2, 1.0), (3, 0.5), (5, 0.3), (20, 0.2), (21, 0.1), (31, 0.05)] {
        powers[i] = p;
    }
    let pdp = PowerDelayProfile::new(2.5, powers, 1e-4)?;
    for void in [10.0, 25.0, 50.0] {
        let clusters = partition_time_clusters(&pdp, void)?;
        let desc: Vec<String> = clusters
            .iter()
            .map(|c| format!("[{:.1}–{:.1} ns, {} bins]", c.start_ns, c.end_ns, c.members.len()))
            .collect();
        println!("void {void:>4} ns: {} clusters {}", clusters.len(), desc.join(" "));
    }

    let lobes = [
        LobeDescriptor { azimuth_deg: 355.0, elevation_deg: 2.0, azimuth_spread_deg: 6.0, elevation_spread_deg: 2.0, power_mw: 1.0 },
        LobeDescriptor { azimuth_deg: 120.0, elevation_deg: -4.0, azimuth_spread_deg: 4.0, elevation_spread_deg: 3.0, power_mw: 0.2 },
    ];
    let pas = render_lobe_spectrum(&lobes)?;
    println!("rendered {}×{} grid", pas.n_azimuth(), pas.n_elevation());
    for lobe in extract_spatial_lobes(&pas, AngleDomain::Aoa, -20.0)? {
        let (az, el) = lobe_rms_spreads(&lobe);
        println!(
            "lobe at ({:.0}°, {:.0}°): {} cells, azimuth spread {az:.2}°, elevation spread {el:.2}°",
            lobe.peak_azimuth_deg,
            lobe.peak_elevation_deg,
            lobe.cells.len()
        );
    }
    Ok(())
}
