//! Continuous distributions attachable to random variables: their CDFs,
//! interval masses, and samplers.
//!
//! The CDFs are exact (special-function based, see [`crate::math`]); only
//! `sample` delegates to `rand_distr` for the draw algorithms. Infinite
//! bounds are first-class: `cdf(-inf) = 0` and `cdf(+inf) = 1` hold exactly,
//! so interval partitions can carry their outermost intervals without any
//! special casing.

use crate::error::{Error, Result};
use crate::math;
use rand::Rng;
use rand_distr::Distribution as _;
use std::fmt;

/// How to read the second argument of `gaussian(m, s)` in program text.
///
/// The default interpretation is the standard deviation; the variance
/// reading is available for interoperability with systems that use it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GaussianParam {
    #[default]
    StdDev,
    Variance,
}

/// A parametric distribution for a continuous random variable.
///
/// Parameters are stored canonically (Gaussian scale is always the standard
/// deviation, Gamma is shape/rate), whatever reading the source text used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Gaussian { mean: f64, sd: f64 },
    Gamma { shape: f64, rate: f64 },
}

// Parameters are validated finite and non-NaN at construction.
impl Eq for DistributionSpec {}

impl DistributionSpec {
    /// Gaussian with the given mean and scale, where `reading` says whether
    /// `scale` is a standard deviation or a variance.
    pub fn gaussian(mean: f64, scale: f64, reading: GaussianParam) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidParameter(format!("gaussian mean must be finite, got {mean}")));
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gaussian scale must be positive and finite, got {scale}"
            )));
        }
        let sd = match reading {
            GaussianParam::StdDev => scale,
            GaussianParam::Variance => scale.sqrt(),
        };
        Ok(DistributionSpec::Gaussian { mean, sd })
    }

    /// Gamma with the given shape and rate, both positive.
    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        if !shape.is_finite() || shape <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma shape must be positive and finite, got {shape}"
            )));
        }
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma rate must be positive and finite, got {rate}"
            )));
        }
        Ok(DistributionSpec::Gamma { shape, rate })
    }

    /// Cumulative distribution function P(X <= x). Accepts +-infinity.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            DistributionSpec::Gaussian { mean, sd } => {
                if x == f64::INFINITY {
                    1.0
                } else if x == f64::NEG_INFINITY {
                    0.0
                } else {
                    0.5 * math::erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2))
                }
            }
            DistributionSpec::Gamma { shape, rate } => {
                if x == f64::INFINITY {
                    1.0
                } else if x <= 0.0 {
                    0.0
                } else {
                    math::gamma_p(shape, rate * x)
                }
            }
        }
    }

    /// Probability mass of the closed interval [lo, hi].
    ///
    /// Infinite endpoints select the distribution tails; `lo > hi` is an
    /// error rather than a silent zero.
    pub fn interval_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        if lo > hi {
            return Err(Error::InvalidInterval(lo, hi));
        }
        Ok((self.cdf(hi) - self.cdf(lo)).max(0.0))
    }

    /// Draw one value. Deterministic for a deterministic `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            DistributionSpec::Gaussian { mean, sd } => {
                rand_distr::Normal::new(mean, sd).expect("validated at construction").sample(rng)
            }
            DistributionSpec::Gamma { shape, rate } => rand_distr::Gamma::new(shape, 1.0 / rate)
                .expect("validated at construction")
                .sample(rng),
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DistributionSpec::Gaussian { mean, sd } => write!(f, "gaussian({mean},{sd})"),
            DistributionSpec::Gamma { shape, rate } => write!(f, "gamma({shape},{rate})"),
        }
    }
}
