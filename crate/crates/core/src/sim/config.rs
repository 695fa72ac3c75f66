use crate::error::{domain, Result};
use crate::params::SystemParams;

use super::dist::ServiceDistribution;

/// Which in-service customer of the displaced class gets removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VictimPolicy {
    #[default]
    RandomWithinClass,
    NewestInService,
    OldestInService,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// `service_rate` must equal the reciprocal of the distribution mean.
    pub params: SystemParams,
    pub distribution: ServiceDistribution,
    pub seed: u64,
    pub replications: usize,
    /// Total arrivals per replication, warm-up included.
    pub arrivals_per_replication: u64,
    pub warmup_fraction: f64,
    pub victim_policy: VictimPolicy,
}

impl SimConfig {
    pub const DEFAULT_REPLICATIONS: usize = 20;
    pub const DEFAULT_ARRIVALS: u64 = 1_000_000;
    pub const DEFAULT_WARMUP: f64 = 0.1;

    pub fn new(params: SystemParams, distribution: ServiceDistribution, seed: u64) -> Self {
        SimConfig {
            params,
            distribution,
            seed,
            replications: Self::DEFAULT_REPLICATIONS,
            arrivals_per_replication: Self::DEFAULT_ARRIVALS,
            warmup_fraction: Self::DEFAULT_WARMUP,
            victim_policy: VictimPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return domain(format!("at least 2 replications are required, got {}", self.replications));
        }
        if self.arrivals_per_replication == 0 {
            return domain("arrivals per replication must be positive");
        }
        if !(0.0..1.0).contains(&self.warmup_fraction) {
            return domain(format!("warm-up fraction must lie in [0, 1), got {}", self.warmup_fraction));
        }
        let product = self.distribution.mean() * self.params.service_rate();
        if (product - 1.0).abs() > 1e-9 {
            return domain(format!(
                "distribution mean {} does not match 1/mu = {}",
                self.distribution.mean(),
                1.0 / self.params.service_rate()
            ));
        }
        Ok(())
    }

    /// Number of leading arrivals excluded from the counts.
    pub fn warmup_arrivals(&self) -> u64 {
        (self.warmup_fraction * self.arrivals_per_replication as f64).floor() as u64
    }
}
