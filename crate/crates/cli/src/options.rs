//! Parsing of the textual flag values shared by several subcommands.

use std::fmt;
use std::str::FromStr;

use preempt_loss::sim::{ServiceDistribution, VictimPolicy};

use crate::error::{CliError, Result};

/// Service-distribution tag: `det`, `exp` or `pareto:SHAPE`, always with
/// mean `1/mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistSpec {
    Deterministic,
    Exponential,
    Pareto(f64),
}

impl FromStr for DistSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "det" => Ok(DistSpec::Deterministic),
            "exp" => Ok(DistSpec::Exponential),
            _ => {
                let shape = s
                    .strip_prefix("pareto:")
                    .ok_or_else(|| CliError::Usage(format!("unknown distribution {s:?}; expected det, exp or pareto:SHAPE")))?;
                let shape: f64 = shape
                    .parse()
                    .map_err(|_| CliError::Usage(format!("invalid Pareto shape {shape:?}")))?;
                if !(shape.is_finite() && shape > 1.0) {
                    return Err(CliError::Usage(format!("Pareto shape must exceed 1, got {shape}")));
                }
                Ok(DistSpec::Pareto(shape))
            }
        }
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::Deterministic => write!(f, "det"),
            DistSpec::Exponential => write!(f, "exp"),
            DistSpec::Pareto(g) => write!(f, "pareto:{g}"),
        }
    }
}

impl DistSpec {
    /// File-name friendly tag.
    pub fn tag(&self) -> String {
        match self {
            DistSpec::Pareto(g) => format!("pareto_{g}"),
            other => other.to_string(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DistSpec::Deterministic => "deterministic".into(),
            DistSpec::Exponential => "exponential".into(),
            DistSpec::Pareto(g) => format!("Pareto shape {g}"),
        }
    }

    pub fn resolve(&self, mu: f64) -> Result<ServiceDistribution> {
        let mean = 1.0 / mu;
        let d = match *self {
            DistSpec::Deterministic => ServiceDistribution::deterministic(mean),
            DistSpec::Exponential => ServiceDistribution::exponential(mu),
            DistSpec::Pareto(g) => ServiceDistribution::pareto_with_mean(g, mean),
        };
        Ok(d?)
    }
}

pub fn parse_rates(s: &str) -> Result<Vec<f64>> {
    let rates: Vec<f64> = s
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("malformed rate {part:?} in list {s:?}")))
        })
        .collect::<Result<_>>()?;
    if rates.is_empty() {
        return Err(CliError::Usage("empty rate list".into()));
    }
    Ok(rates)
}

pub fn parse_dists(s: &str) -> Result<Vec<DistSpec>> {
    s.split(',').map(str::parse).collect()
}

pub fn parse_victim(s: &str) -> Result<VictimPolicy> {
    match s.trim() {
        "random" => Ok(VictimPolicy::RandomWithinClass),
        "newest" => Ok(VictimPolicy::NewestInService),
        "oldest" => Ok(VictimPolicy::OldestInService),
        other => Err(CliError::Usage(format!("unknown victim policy {other:?}; expected random, newest or oldest"))),
    }
}

pub fn victim_name(v: VictimPolicy) -> &'static str {
    match v {
        VictimPolicy::RandomWithinClass => "random",
        VictimPolicy::NewestInService => "newest",
        VictimPolicy::OldestInService => "oldest",
    }
}
