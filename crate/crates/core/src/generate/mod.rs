//! Stochastic impulse-response generation with the time-cluster /
//! spatial-lobe construction: clusters of exponentially decaying subpaths in
//! delay, lobes of Gaussian-scattered directions in angle, and a random
//! allocation of subpaths to lobes.

mod config;
mod counts;
mod spatial;
mod temporal;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

pub use config::GeneratorConfig;
pub use counts::{draw_counts, CountDistribution, CountModel};
pub use spatial::{LobeDraw, SpatialLobes, MIN_LOBE_SPREAD_DEG};
pub use temporal::{
    cluster_power_fractions, intra_cluster_offsets, subpath_power_fractions, ClusterSkeleton, SubpathDraw,
};

use crate::error::Result;
use crate::types::{ChannelImpulseResponse, LobeDescriptor, MultipathComponent};
use crate::units::{db_to_linear, wrap_azimuth};

/// A validated configuration with its count distributions precomputed.
#[derive(Debug, Clone)]
pub struct Generator {
    config: GeneratorConfig,
    clusters: CountDistribution,
    subpaths: CountDistribution,
    aod_lobes: CountDistribution,
    aoa_lobes: CountDistribution,
}

impl Generator {
    /// Lobe counts are calibrated so that the mean number of lobes that
    /// actually receive a path matches the scenario, given the distribution
    /// of the number of paths per realization.
    pub fn new(config: GeneratorConfig) -> Result<Self> {
        config.validate()?;
        let sc = &config.scenario;
        let model = config.count_model;
        let clusters = CountDistribution::new(sc.num_clusters_mu, sc.num_clusters_sigma, model)?;
        let subpaths = CountDistribution::new(sc.num_subpaths_mu, sc.num_subpaths_sigma, model)?;
        let len = |mu: f64, s: f64| (mu + 15.0 * s + 20.0).ceil() as usize;
        let span = len(sc.num_aod_lobes_mu, sc.num_aod_lobes_sigma).max(len(sc.num_aoa_lobes_mu, sc.num_aoa_lobes_sigma));
        let paths = counts::compound_pmf(&clusters, &subpaths, span);
        let aod_lobes = CountDistribution::populated(sc.num_aod_lobes_mu, sc.num_aod_lobes_sigma, model, &paths)?;
        let aoa_lobes = CountDistribution::populated(sc.num_aoa_lobes_mu, sc.num_aoa_lobes_sigma, model, &paths)?;
        Ok(Self { config, clusters, subpaths, aod_lobes, aoa_lobes })
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }

    /// Random stream of realization `index`.
    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index);
        rng
    }

    /// Realization `index` of the ensemble.
    pub fn realization(&self, index: u64) -> Result<ChannelImpulseResponse> {
        let mut rng = self.rng(index);
        let skeleton = self.generate_cluster_skeleton(&mut rng);
        let mut subpaths = Vec::new();
        for (c, cluster) in skeleton.iter().enumerate() {
            subpaths.extend(self.generate_subpaths(cluster, &mut rng).into_iter().map(|s| (c, s)));
        }
        if let Some(floor_db) = self.config.min_subpath_power_db {
            let strongest = subpaths.iter().map(|s| s.1.power).fold(0.0, f64::max);
            let floor = strongest * db_to_linear(-floor_db);
            subpaths.retain(|s| s.1.power >= floor);
        }
        let lobes = self.generate_spatial_lobes(&mut rng);
        self.assemble_cir(&subpaths, &lobes, &mut rng)
    }

    /// `n` realizations; realization `i` uses its own random stream, so the
    /// result does not depend on the number of worker threads.
    pub fn ensemble(&self, n: usize) -> Result<Vec<ChannelImpulseResponse>> {
        (0..n as u64).into_par_iter().map(|i| self.realization(i)).collect()
    }

    /// Attaches angles and XPR to `(cluster, subpath)` draws.
    ///
    /// The strongest paths seed distinct lobes (in random lobe order) so that
    /// no lobe is left empty while paths remain; every other path picks a
    /// lobe uniformly at random. Path angles scatter about the lobe center
    /// with the lobe's RMS spreads (azimuth wrapped, elevation clipped).
    /// Lobes without paths are dropped.
    pub fn assemble_cir<R: Rng + ?Sized>(
        &self,
        subpaths: &[(usize, SubpathDraw)],
        lobes: &SpatialLobes,
        rng: &mut R,
    ) -> Result<ChannelImpulseResponse> {
        let mut order: Vec<usize> = (0..subpaths.len()).collect();
        order.sort_by(|&a, &b| {
            subpaths[a].1.delay_ns.total_cmp(&subpaths[b].1.delay_ns).then(a.cmp(&b))
        });
        let powers: Vec<f64> = order.iter().map(|&i| subpaths[i].1.power).collect();
        let aod_ids = allocate(lobes.aod.len(), &powers, rng);
        let aoa_ids = allocate(lobes.aoa.len(), &powers, rng);
        let sc = &self.config.scenario;
        let xpr = (sc.xpr_sigma_db > 0.0).then(|| Normal::new(sc.xpr_mu_db, sc.xpr_sigma_db).expect("sigma > 0"));

        let mut paths = Vec::with_capacity(order.len());
        for (j, &i) in order.iter().enumerate() {
            let (az_d, el_d) = scatter(&lobes.aod[aod_ids[j]], rng);
            let (az_a, el_a) = scatter(&lobes.aoa[aoa_ids[j]], rng);
            let x = xpr.as_ref().map_or(sc.xpr_mu_db, |d| d.sample(rng));
            paths.push(MultipathComponent {
                delay_ns: subpaths[i].1.delay_ns,
                power_mw: subpaths[i].1.power,
                aod_azimuth_deg: az_d,
                aod_elevation_deg: el_d,
                aoa_azimuth_deg: az_a,
                aoa_elevation_deg: el_a,
                xpr_db: x.max(0.0),
            });
        }
        let mut clusters: Vec<usize> = order.iter().map(|&i| subpaths[i].0).collect();
        crate::kpm::relabel(&mut clusters);
        let (aod_ids, aod_layer) = compact(&aod_ids, &lobes.aod, &powers);
        let (aoa_ids, aoa_layer) = compact(&aoa_ids, &lobes.aoa, &powers);
        ChannelImpulseResponse::new(
            self.config.scenario_name.clone(),
            paths,
            clusters,
            aoa_ids,
            aod_ids,
            aoa_layer,
            aod_layer,
        )
    }
}

/// `n` realizations of `config`.
pub fn generate_ensemble(config: &GeneratorConfig, n: usize) -> Result<Vec<ChannelImpulseResponse>> {
    Generator::new(config.clone())?.ensemble(n)
}

fn allocate<R: Rng + ?Sized>(n_lobes: usize, powers: &[f64], rng: &mut R) -> Vec<usize> {
    let mut strongest: Vec<usize> = (0..powers.len()).collect();
    strongest.sort_by(|&a, &b| powers[b].total_cmp(&powers[a]).then(a.cmp(&b)));
    let mut perm: Vec<usize> = (0..n_lobes).collect();
    perm.shuffle(rng);
    let mut ids = vec![0; powers.len()];
    for (rank, &p) in strongest.iter().enumerate() {
        ids[p] = if rank < n_lobes { perm[rank] } else { rng.random_range(0..n_lobes) };
    }
    ids
}

fn scatter<R: Rng + ?Sized>(lobe: &LobeDraw, rng: &mut R) -> (f64, f64) {
    let z1: f64 = rng.sample(rand_distr::StandardNormal);
    let z2: f64 = rng.sample(rand_distr::StandardNormal);
    (
        wrap_azimuth(lobe.azimuth_deg + lobe.azimuth_spread_deg * z1),
        (lobe.elevation_deg + lobe.elevation_spread_deg * z2).clamp(-90.0, 90.0),
    )
}

fn compact(ids: &[usize], lobes: &[LobeDraw], powers: &[f64]) -> (Vec<usize>, Vec<LobeDescriptor>) {
    let mut power = vec![0.0; lobes.len()];
    for (&l, p) in ids.iter().zip(powers) {
        power[l] += p;
    }
    let mut map = vec![usize::MAX; lobes.len()];
    let mut layer = Vec::new();
    for (l, lobe) in lobes.iter().enumerate() {
        if power[l] > 0.0 {
            map[l] = layer.len();
            layer.push(LobeDescriptor {
                azimuth_deg: lobe.azimuth_deg,
                elevation_deg: lobe.elevation_deg,
                azimuth_spread_deg: lobe.azimuth_spread_deg,
                elevation_spread_deg: lobe.elevation_spread_deg,
                power_mw: power[l],
            });
        }
    }
    (ids.iter().map(|&l| map[l]).collect(), layer)
}
