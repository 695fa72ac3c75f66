use std::fmt;

use crate::error::{domain, Result};

/// Service-time distribution shared by all classes in one experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ServiceDistribution {
    Deterministic { mean: f64 },
    Exponential { rate: f64 },
    /// Pareto type I with support `[scale, ∞)`.
    Pareto { shape: f64, scale: f64 },
}

impl ServiceDistribution {
    pub fn deterministic(mean: f64) -> Result<Self> {
        check_positive("deterministic mean", mean)?;
        Ok(ServiceDistribution::Deterministic { mean })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        check_positive("exponential rate", rate)?;
        Ok(ServiceDistribution::Exponential { rate })
    }

    pub fn pareto(shape: f64, scale: f64) -> Result<Self> {
        if !(shape.is_finite() && shape > 1.0) {
            return domain(format!("Pareto shape must exceed 1 for a finite mean, got {shape}"));
        }
        check_positive("Pareto scale", scale)?;
        Ok(ServiceDistribution::Pareto { shape, scale })
    }

    /// Pareto with the scale chosen so the mean equals `mean`:
    /// `scale = mean (shape − 1) / shape`.
    pub fn pareto_with_mean(shape: f64, mean: f64) -> Result<Self> {
        check_positive("Pareto mean", mean)?;
        Self::pareto(shape, mean * (shape - 1.0) / shape)
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ServiceDistribution::Deterministic { mean } => mean,
            ServiceDistribution::Exponential { rate } => 1.0 / rate,
            ServiceDistribution::Pareto { shape, scale } => shape * scale / (shape - 1.0),
        }
    }

    /// Inverse-CDF draw for a uniform variate known to lie in `(0, 1)`.
    pub(crate) fn sample_unchecked(&self, uniform: f64) -> f64 {
        match *self {
            ServiceDistribution::Deterministic { mean } => mean,
            ServiceDistribution::Exponential { rate } => -uniform.ln() / rate,
            ServiceDistribution::Pareto { shape, scale } => scale * uniform.powf(-1.0 / shape),
        }
    }
}

impl fmt::Display for ServiceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ServiceDistribution::Deterministic { mean } => write!(f, "deterministic(mean={mean})"),
            ServiceDistribution::Exponential { rate } => write!(f, "exponential(rate={rate})"),
            ServiceDistribution::Pareto { shape, scale } => {
                write!(f, "pareto(shape={shape}, scale={scale})")
            }
        }
    }
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        domain(format!("{what} must be positive, got {v}"))
    }
}

/// Maps a uniform variate in `(0, 1)` to a service time by inversion.
pub fn sample_service(dist: &ServiceDistribution, uniform: f64) -> Result<f64> {
    if !(uniform > 0.0 && uniform < 1.0) {
        return domain(format!("uniform variate must lie in (0, 1), got {uniform}"));
    }
    Ok(dist.sample_unchecked(uniform))
}
