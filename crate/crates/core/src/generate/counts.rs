use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{ChannelError, Result};
use crate::units::normal_cdf;

/// Distribution family for integer counts (clusters, subpaths, lobes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CountModel {
    /// `max(1, round(N(m, σ²)))`.
    #[default]
    RoundedGaussian,
    /// `max(1, Poisson(λ))`.
    Poisson,
}

/// A count distribution clamped at 1.
///
/// The location parameter (`m` or `λ`) is solved so that the clamped
/// distribution has the requested mean; clamping alone would bias the mean
/// upwards (e.g. `max(1, round(N(2.1, 1.4²)))` has mean 2.39).
#[derive(Debug, Clone, PartialEq)]
pub struct CountDistribution {
    model: CountModel,
    sigma: f64,
    location: f64,
    kind: Kind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Constant(usize),
    Gaussian,
    Poisson,
}

impl CountDistribution {
    /// Distribution with mean exactly `mu` (up to solver precision).
    pub fn new(mu: f64, sigma: f64, model: CountModel) -> Result<Self> {
        check(mu, sigma)?;
        if let Some(c) = degenerate(mu, sigma, model) {
            return Ok(c);
        }
        let lo = match model {
            CountModel::RoundedGaussian => mu - 10.0 * sigma - 10.0,
            CountModel::Poisson => 1e-9,
        };
        let at = |l: f64| Self::with_location(model, sigma, l).expect("finite location");
        let loc = bisect(lo, mu + 1.0, |l| at(l).mean() - mu);
        Self::with_location(model, sigma, loc)
    }

    /// Distribution with an explicit location and no mean correction.
    pub fn with_location(model: CountModel, sigma: f64, location: f64) -> Result<Self> {
        let kind = match model {
            CountModel::RoundedGaussian if sigma == 0.0 => Kind::Constant((location.round().max(1.0)) as usize),
            CountModel::RoundedGaussian => Kind::Gaussian,
            CountModel::Poisson if location <= 0.0 => Kind::Constant(1),
            CountModel::Poisson => Kind::Poisson,
        };
        if !(location.is_finite() && sigma.is_finite() && sigma >= 0.0) {
            return Err(ChannelError::invalid("count distribution parameters must be finite"));
        }
        Ok(Self { model, sigma, location, kind })
    }

    /// Distribution of a count `N` whose *populated* part `min(N, P)` has
    /// mean `mu`, where `P` is an independent count with pmf `p_pmf`
    /// (index = value). Used for lobe counts: a realization with `P` paths
    /// can populate at most `P` lobes.
    pub fn populated(mu: f64, sigma: f64, model: CountModel, p_pmf: &[f64]) -> Result<Self> {
        check(mu, sigma)?;
        if let Some(c) = degenerate(mu, sigma, model) {
            return Ok(c);
        }
        let capped_mean = |d: &CountDistribution| -> f64 {
            let kmax = d.support_max();
            let mut tail = 1.0;
            let mut acc = 0.0;
            for (p, &w) in p_pmf.iter().enumerate().take(kmax + 1) {
                tail -= w;
                if w > 0.0 {
                    acc += w * (1..=kmax).map(|n| d.pmf(n) * n.min(p) as f64).sum::<f64>();
                }
            }
            acc + tail.max(0.0) * d.mean()
        };
        let lo = match model {
            CountModel::RoundedGaussian => mu - 10.0 * sigma - 10.0,
            CountModel::Poisson => 1e-9,
        };
        let hi = mu + 10.0 * sigma + 10.0;
        let at = |l: f64| Self::with_location(model, sigma, l).expect("finite location");
        if capped_mean(&at(hi)) < mu {
            log::warn!("populated count mean {mu} is not reachable; using the uncapped calibration");
            return Self::new(mu, sigma, model);
        }
        let loc = bisect(lo, hi, |l| capped_mean(&at(l)) - mu);
        Self::with_location(model, sigma, loc)
    }

    pub fn model(&self) -> CountModel {
        self.model
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    /// Largest value with non-negligible probability.
    pub fn support_max(&self) -> usize {
        match self.kind {
            Kind::Constant(c) => c,
            Kind::Gaussian => (self.location + 12.0 * self.sigma + 2.0).max(1.0).ceil() as usize,
            Kind::Poisson => (self.location + 12.0 * self.location.sqrt() + 12.0).ceil() as usize,
        }
    }

    /// `P(N = k)`.
    pub fn pmf(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        match self.kind {
            Kind::Constant(c) => f64::from(u8::from(k == c)),
            Kind::Gaussian => {
                let z = |x: f64| normal_cdf((x - self.location) / self.sigma);
                let upper = z(k as f64 + 0.5);
                if k == 1 {
                    upper
                } else {
                    upper - z(k as f64 - 0.5)
                }
            }
            Kind::Poisson => {
                let l = self.location;
                let ln = |j: usize| -l + j as f64 * l.ln() - ln_factorial(j);
                if k == 1 {
                    ln(0).exp() + ln(1).exp()
                } else {
                    ln(k).exp()
                }
            }
        }
    }

    /// Exact mean of the clamped distribution.
    pub fn mean(&self) -> f64 {
        (1..=self.support_max()).map(|k| k as f64 * self.pmf(k)).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self.kind {
            Kind::Constant(c) => c,
            Kind::Gaussian => {
                let x = Normal::new(self.location, self.sigma).expect("sigma > 0").sample(rng);
                x.round().max(1.0) as usize
            }
            Kind::Poisson => {
                let x: f64 = Poisson::new(self.location).expect("lambda > 0").sample(rng);
                (x as usize).max(1)
            }
        }
    }
}

/// One count draw from the mean-corrected rounded-Gaussian model.
pub fn draw_counts<R: Rng + ?Sized>(mu: f64, sigma: f64, rng: &mut R) -> Result<usize> {
    Ok(CountDistribution::new(mu, sigma, CountModel::RoundedGaussian)?.sample(rng))
}

fn check(mu: f64, sigma: f64) -> Result<()> {
    if !(mu.is_finite() && mu >= 1.0) {
        return Err(ChannelError::invalid(format!("count mean must be >= 1, got {mu}")));
    }
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(ChannelError::invalid(format!("count std must be >= 0, got {sigma}")));
    }
    Ok(())
}

fn degenerate(mu: f64, sigma: f64, model: CountModel) -> Option<CountDistribution> {
    let constant = |c: usize| CountDistribution { model, sigma, location: c as f64, kind: Kind::Constant(c) };
    if mu <= 1.0 + 1e-12 {
        return Some(constant(1));
    }
    if model == CountModel::RoundedGaussian && sigma == 0.0 {
        return Some(constant(mu.round() as usize));
    }
    None
}

/// Root of an increasing function on [lo, hi] by bisection.
fn bisect(mut lo: f64, mut hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// pmf (index = value) of `Σ_{i=1}^{N} M_i`, truncated to values `< len`.
pub(crate) fn compound_pmf(n: &CountDistribution, m: &CountDistribution, len: usize) -> Vec<f64> {
    let m_pmf: Vec<f64> = (0..len).map(|k| m.pmf(k)).collect();
    let mut out = vec![0.0; len];
    let mut conv = vec![0.0; len];
    conv[0] = 1.0;
    for c in 1..=n.support_max() {
        let mut next = vec![0.0; len];
        for (i, &a) in conv.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in m_pmf.iter().enumerate().take(len - i) {
                next[i + j] += a * b;
            }
        }
        conv = next;
        let w = n.pmf(c);
        for (o, v) in out.iter_mut().zip(&conv) {
            *o += w * v;
        }
    }
    out
}
