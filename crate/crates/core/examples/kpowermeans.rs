//! Multipath clustering: MCD, cluster-count selection, refinement and
//! per-cluster statistics.

use mmwchan::kpm::{
    cluster_statistics, combine_validate, mcd, select_optimal_k, shape_pruning, McdParams, DEFAULT_COMBINE_T,
    DEFAULT_PRUNE_P, DEFAULT_PRUNE_S,
};
use mmwchan::units::wrap_azimuth;
use mmwchan::MultipathComponent;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> mmwchan::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let centers = [(20.0, 30.0, 200.0), (70.0, 150.0, 260.0), (140.0, 280.0, 20.0)];
    let mut paths = Vec::new();
    for &(delay, aod, aoa) in &centers {
        for _ in 0..10 {
            paths.push(MultipathComponent {
                delay_ns: delay + rng.random_range(-2.0..2.0),
                power_mw: rng.random_range(0.05..1.0),
                aod_azimuth_deg: wrap_azimuth(aod + rng.random_range(-3.0..3.0)),
                aod_elevation_deg: rng.random_range(-2.0..2.0),
                aoa_azimuth_deg: wrap_azimuth(aoa + rng.random_range(-3.0..3.0)),
                aoa_elevation_deg: rng.random_range(-2.0..2.0),
                xpr_db: 15.0,
            });
        }
    }

    let params = McdParams::from_paths(&paths, 1.0)?;
    println!("MCD within a cluster {:.4}, across clusters {:.4}", mcd(&paths[0], &paths[1], &params), mcd(&paths[0], &paths[10], &params));

    let sel = select_optimal_k(&paths, 2..=8, &params, 50, 7)?;
    for s in &sel.scores {
        println!("K={} objective={:.4} CH={} DB={}", s.k, s.objective, s.ch, s.db);
    }
    println!("selected K* = {}", sel.k_star);

    let merged = combine_validate(&sel.partition, &paths, &params, DEFAULT_COMBINE_T);
    let pruned = shape_pruning(&merged, &paths, &params, DEFAULT_PRUNE_S, DEFAULT_PRUNE_P);
    println!("after refinement: {} clusters, {} of {} paths retained", pruned.k(), pruned.num_retained(), paths.len());

    let stats = cluster_statistics(&pruned, &paths)?;
    for (i, c) in stats.clusters.iter().enumerate() {
        println!(
            "cluster {i}: {} paths, ASD {:.2}°, ASA {:.2}°, ZSA {:.2}°, mean delay {:.1} ns",
            c.num_paths, c.asd_deg, c.asa_deg, c.zsa_deg, c.mean_delay_ns
        );
    }
    Ok(())
}
