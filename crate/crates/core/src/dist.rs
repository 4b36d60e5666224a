//! Gaussian and Gaussian-mixture predictive distributions.
//!
//! The normal CDF is `0.5 * erfc(-z / sqrt 2)` with `erfc` from the `libm`
//! crate (a port of the FreeBSD/musl implementation, accurate to about one
//! ulp), so its absolute error is far below the 1e-7 this crate promises.

use crate::error::{Error, Result};
use crate::rng::{CounterRng, Seed};

/// Smallest variance any Gaussian in this crate will carry.
pub const VARIANCE_FLOOR: f64 = 1e-12;

/// `0.5 * ln(2 pi)`.
pub const HALF_LN_TAU: f64 = 0.918_938_533_204_672_8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gaussian {
    mean: f64,
    variance: f64,
}

impl Gaussian {
    /// Variances below [`VARIANCE_FLOOR`] (or NaN) are raised to the floor.
    pub fn new(mean: f64, variance: f64) -> Self {
        Gaussian {
            mean,
            variance: variance.max(VARIANCE_FLOOR),
        }
    }

    pub fn standard() -> Self {
        Gaussian::new(0.0, 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn log_density(&self, y: f64) -> f64 {
        let d = y - self.mean;
        -HALF_LN_TAU - 0.5 * self.variance.ln() - d * d / (2.0 * self.variance)
    }

    pub fn cdf(&self, y: f64) -> f64 {
        standard_normal_cdf((y - self.mean) / self.std_dev())
    }

    pub fn sample_with(&self, rng: &mut CounterRng) -> f64 {
        self.mean + self.std_dev() * rng.standard_normal()
    }

    /// Same mean, standard deviation multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        Gaussian::new(self.mean, self.variance * factor * factor)
    }
}

pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * std::f64::consts::FRAC_1_SQRT_2)
}

/// A finite mixture of Gaussians with nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMixture {
    components: Vec<(f64, Gaussian)>,
}

impl GaussianMixture {
    pub fn new(components: Vec<(f64, Gaussian)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Empty {
                what: "gaussian mixture",
            });
        }
        if components
            .iter()
            .any(|(w, _)| !w.is_finite() || *w < 0.0)
        {
            return Err(Error::InvalidArgument(
                "mixture weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "mixture weights sum to {total}, not 1"
            )));
        }
        Ok(GaussianMixture { components })
    }

    /// Equal weights over `gaussians`.
    pub fn uniform(gaussians: impl IntoIterator<Item = Gaussian>) -> Result<Self> {
        let gs: Vec<Gaussian> = gaussians.into_iter().collect();
        let w = 1.0 / gs.len() as f64;
        GaussianMixture::new(gs.into_iter().map(|g| (w, g)).collect())
    }

    pub fn components(&self) -> &[(f64, Gaussian)] {
        &self.components
    }

    /// `log sum_k w_k N(y; mu_k, s2_k)`, shifted by the largest term.
    pub fn log_density(&self, y: f64) -> f64 {
        let terms = || {
            self.components
                .iter()
                .filter(|(w, _)| *w > 0.0)
                .map(|(w, g)| w.ln() + g.log_density(y))
        };
        let peak = terms().fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return peak;
        }
        peak + terms().map(|t| (t - peak).exp()).sum::<f64>().ln()
    }

    pub fn cdf(&self, y: f64) -> f64 {
        self.components
            .iter()
            .map(|(w, g)| w * g.cdf(y))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.components.iter().map(|(w, g)| w * g.mean).sum()
    }

    pub fn variance(&self) -> f64 {
        self.moment_match().variance
    }

    /// The Gaussian with this mixture's mean and variance.
    pub fn moment_match(&self) -> Gaussian {
        let mean = self.mean();
        // sum_k w_k (s2_k + (mu_k - mean)^2), equal to E[y^2] - mean^2 but
        // without the cancellation.
        let variance = self
            .components
            .iter()
            .map(|(w, g)| {
                let d = g.mean - mean;
                w * (g.variance + d * d)
            })
            .sum();
        Gaussian::new(mean, variance)
    }

    pub fn sample_with(&self, rng: &mut CounterRng) -> f64 {
        let u = rng.uniform();
        let mut acc = 0.0;
        let mut chosen = &self.components[self.components.len() - 1].1;
        for (w, g) in &self.components {
            acc += w;
            if u < acc {
                chosen = g;
                break;
            }
        }
        chosen.sample_with(rng)
    }

    pub fn rescaled(&self, factor: f64) -> Self {
        GaussianMixture {
            components: self
                .components
                .iter()
                .map(|(w, g)| (*w, g.rescaled(factor)))
                .collect(),
        }
    }
}

/// A per-input predictive distribution over the target.
#[derive(Clone, Debug, PartialEq)]
pub enum Predictive {
    Gaussian(Gaussian),
    Mixture(GaussianMixture),
}

impl Predictive {
    pub fn log_density(&self, y: f64) -> f64 {
        match self {
            Predictive::Gaussian(g) => g.log_density(y),
            Predictive::Mixture(m) => m.log_density(y),
        }
    }

    pub fn cdf(&self, y: f64) -> f64 {
        match self {
            Predictive::Gaussian(g) => g.cdf(y),
            Predictive::Mixture(m) => m.cdf(y),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Predictive::Gaussian(g) => g.mean(),
            Predictive::Mixture(m) => m.mean(),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            Predictive::Gaussian(g) => g.variance(),
            Predictive::Mixture(m) => m.variance(),
        }
    }

    /// One draw, deterministic in `seed`.
    pub fn sample(&self, seed: Seed) -> f64 {
        self.sample_with(&mut CounterRng::new(seed))
    }

    pub fn sample_with(&self, rng: &mut CounterRng) -> f64 {
        match self {
            Predictive::Gaussian(g) => g.sample_with(rng),
            Predictive::Mixture(m) => m.sample_with(rng),
        }
    }

    pub fn rescaled(&self, factor: f64) -> Self {
        match self {
            Predictive::Gaussian(g) => Predictive::Gaussian(g.rescaled(factor)),
            Predictive::Mixture(m) => Predictive::Mixture(m.rescaled(factor)),
        }
    }
}

impl From<Gaussian> for Predictive {
    fn from(g: Gaussian) -> Self {
        Predictive::Gaussian(g)
    }
}

impl From<GaussianMixture> for Predictive {
    fn from(m: GaussianMixture) -> Self {
        Predictive::Mixture(m)
    }
}
