use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use super::Generator;
use crate::units::db_to_linear;

/// One time cluster of a realization before path angles are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSkeleton {
    /// Delay of the first arrival, ns.
    pub start_ns: f64,
    /// Subpath delay offsets from the first arrival, ascending, first = 0.
    pub offsets_ns: Vec<f64>,
    /// Fraction of the realization's power carried by the cluster.
    pub power_fraction: f64,
}

/// A subpath with absolute delay and power fraction of the realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubpathDraw {
    pub delay_ns: f64,
    pub power: f64,
}

/// `exp(−τ/Γ)·10^(X/10)` per cluster, renormalized to unit sum.
pub fn cluster_power_fractions(excess_delays_ns: &[f64], decay_ns: f64, shadowing_db: &[f64]) -> Vec<f64> {
    normalized(excess_delays_ns, decay_ns, shadowing_db)
}

/// `exp(−δτ/γ)·10^(Y/10)` per subpath, renormalized to unit sum.
pub fn subpath_power_fractions(offsets_ns: &[f64], decay_ns: f64, shadowing_db: &[f64]) -> Vec<f64> {
    normalized(offsets_ns, decay_ns, shadowing_db)
}

fn normalized(x: &[f64], decay: f64, shadow: &[f64]) -> Vec<f64> {
    let raw: Vec<f64> = x.iter().zip(shadow).map(|(t, s)| (-t / decay).exp() * db_to_linear(*s)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|r| r / total).collect()
}

/// Offsets of `m` sorted Exp(γ) arrivals relative to the first one,
/// conditioned on no gap reaching `void_ns`.
///
/// The spacings of sorted exponentials are independent, the k-th being
/// Exp(γ/(m−k)); each is drawn from its law truncated to [0, void).
pub fn intra_cluster_offsets<R: Rng + ?Sized>(m: usize, gamma_ns: f64, void_ns: f64, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::with_capacity(m);
    let mut t = 0.0;
    out.push(t);
    for k in 1..m {
        let mean = gamma_ns / (m - k) as f64;
        let cap = 1.0 - (-void_ns / mean).exp();
        let u: f64 = rng.random();
        t += -mean * (1.0 - u * cap).ln();
        out.push(t);
    }
    out
}

impl Generator {
    /// Draws the cluster count, per-cluster subpath counts and offsets, the
    /// cluster layout and the cluster power fractions.
    ///
    /// Clusters follow one another with a gap of `void + Exp(mean)` between
    /// the last arrival of a cluster and the first arrival of the next.
    pub fn generate_cluster_skeleton<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<ClusterSkeleton> {
        let sc = &self.config.scenario;
        let n = self.clusters.sample(rng);
        let gap_mean = self.config.inter_cluster_exponential_mean_ns;
        let mut starts = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        let mut t = 0.0;
        for c in 0..n {
            if c > 0 {
                let last: &Vec<f64> = offsets.last().expect("previous cluster");
                let extra = if gap_mean > 0.0 {
                    Exp::new(1.0 / gap_mean).expect("positive rate").sample(rng)
                } else {
                    0.0
                };
                t += last.last().expect("non-empty") + sc.inter_cluster_void_ns + extra;
            }
            starts.push(t);
            let m = self.subpaths.sample(rng);
            offsets.push(intra_cluster_offsets(m, sc.subpath_decay_gamma_ns, sc.inter_cluster_void_ns, rng));
        }
        let shadow = normal_draws(n, sc.per_cluster_shadowing_db, rng);
        let fractions = cluster_power_fractions(&starts, sc.cluster_decay_gamma_ns, &shadow);
        starts
            .into_iter()
            .zip(offsets)
            .zip(fractions)
            .map(|((start_ns, offsets_ns), power_fraction)| ClusterSkeleton { start_ns, offsets_ns, power_fraction })
            .collect()
    }

    /// Subpath powers of one cluster: per-subpath shadowed exponential decay,
    /// renormalized within the cluster and scaled by its power fraction.
    pub fn generate_subpaths<R: Rng + ?Sized>(&self, cluster: &ClusterSkeleton, rng: &mut R) -> Vec<SubpathDraw> {
        let sc = &self.config.scenario;
        let shadow = normal_draws(cluster.offsets_ns.len(), sc.per_subpath_shadowing_db, rng);
        subpath_power_fractions(&cluster.offsets_ns, sc.subpath_decay_gamma_ns, &shadow)
            .into_iter()
            .zip(&cluster.offsets_ns)
            .map(|(f, o)| SubpathDraw { delay_ns: cluster.start_ns + o, power: f * cluster.power_fraction })
            .collect()
    }
}

pub(crate) fn normal_draws<R: Rng + ?Sized>(n: usize, sigma: f64, rng: &mut R) -> Vec<f64> {
    if sigma == 0.0 {
        return vec![0.0; n];
    }
    let d = Normal::new(0.0, sigma).expect("sigma > 0");
    (0..n).map(|_| d.sample(rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_form_ratios() {
        let g = 49.4;
        let f = cluster_power_fractions(&[0.0, g * std::f64::consts::LN_2], g, &[0.0, 0.0]);
        assert!((f[0] / f[1] - 2.0).abs() < 1e-12);
        assert_eq!(cluster_power_fractions(&[12.0], g, &[3.0]), vec![1.0]);
        let s = subpath_power_fractions(&[0.0, 16.9 * std::f64::consts::LN_10], 16.9, &[0.0, 0.0]);
        assert!((s[0] / s[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn offsets_respect_void_and_match_conditioned_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (m, gamma, void) = (4, 16.9, 25.0);
        let mut sum_last = 0.0;
        let mut accepted = 0usize;
        let mut sum_ref = 0.0;
        let exp = Exp::new(1.0 / gamma).unwrap();
        for _ in 0..200_000 {
            let o = intra_cluster_offsets(m, gamma, void, &mut rng);
            assert_eq!(o[0], 0.0);
            assert!(o.windows(2).all(|w| w[1] >= w[0] && w[1] - w[0] < void));
            sum_last += o[m - 1];
            // rejection oracle: sorted Exp(γ) draws with no gap >= void
            let mut x: Vec<f64> = (0..m).map(|_| exp.sample(&mut rng)).collect();
            x.sort_by(f64::total_cmp);
            if x.windows(2).all(|w| w[1] - w[0] < void) {
                accepted += 1;
                sum_ref += x[m - 1] - x[0];
            }
        }
        let (a, b) = (sum_last / 200_000.0, sum_ref / accepted as f64);
        assert!((a - b).abs() < 0.15, "{a} vs {b}");
    }
}
