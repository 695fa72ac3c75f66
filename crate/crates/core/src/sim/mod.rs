//! Discrete-event simulation of the preemptive-priority loss system with a
//! general service-time distribution.
//!
//! Replications are independent: replication `r` draws from its own
//! ChaCha12 stream (see [`replication_seed`]) and they run in parallel, with
//! results aggregated in replication order.

mod config;
mod dist;
mod engine;

pub use config::{SimConfig, VictimPolicy};
pub use dist::{sample_service, ServiceDistribution};
pub use engine::{replication_seed, run_replication, splitmix64, ClassCounts, ReplicationCounts};

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::stats::t_confidence;

/// Loss ratios of one replication.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossRatios {
    pub blocked_on_arrival: f64,
    pub preempted: f64,
    pub total: f64,
}

impl LossRatios {
    fn from_counts(arrivals: u64, blocked: u64, preempted: u64) -> Self {
        let n = arrivals as f64;
        let blocked_on_arrival = blocked as f64 / n;
        let preempted = preempted as f64 / n;
        LossRatios {
            blocked_on_arrival,
            preempted,
            total: blocked_on_arrival + preempted,
        }
    }
}

impl ReplicationCounts {
    /// Per-class ratios followed by the all-class ratio.
    pub fn ratios(&self) -> Result<(Vec<LossRatios>, LossRatios)> {
        let mut per_class = Vec::with_capacity(self.per_class.len());
        for (i, c) in self.per_class.iter().enumerate() {
            if c.arrivals == 0 {
                return domain(format!(
                    "class {} had no counted arrivals; loss ratios are undefined",
                    i + 1
                ));
            }
            per_class.push(LossRatios::from_counts(c.arrivals, c.blocked_on_arrival, c.preempted));
        }
        let sum = |f: fn(&ClassCounts) -> u64| self.per_class.iter().map(f).sum::<u64>();
        let overall = LossRatios::from_counts(
            sum(|c| c.arrivals),
            sum(|c| c.blocked_on_arrival),
            sum(|c| c.preempted),
        );
        Ok((per_class, overall))
    }
}

/// Mean ratios across replications with the 95% Student-t half-width of the
/// total.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassEstimate {
    pub blocked_on_arrival_ratio: f64,
    pub preempted_ratio: f64,
    pub total_ratio: f64,
    pub ci_halfwidth_95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimEstimate {
    pub per_class: Vec<ClassEstimate>,
    pub overall: ClassEstimate,
    pub events_processed: u64,
    pub seed_used: u64,
}

fn estimate(samples: &[LossRatios]) -> Result<ClassEstimate> {
    let n = samples.len() as f64;
    let mean = |f: fn(&LossRatios) -> f64| samples.iter().map(f).sum::<f64>() / n;
    let totals: Vec<f64> = samples.iter().map(|s| s.total).collect();
    let summary = t_confidence(&totals, 0.95)?;
    Ok(ClassEstimate {
        blocked_on_arrival_ratio: mean(|s| s.blocked_on_arrival),
        preempted_ratio: mean(|s| s.preempted),
        total_ratio: summary.mean,
        ci_halfwidth_95: summary.ci_halfwidth_95,
    })
}

/// Runs `config.replications` replications and aggregates them.
pub fn simulate(config: &SimConfig) -> Result<SimEstimate> {
    config.validate()?;
    let runs: Vec<ReplicationCounts> = (0..config.replications as u64)
        .into_par_iter()
        .map(|r| run_replication(config, r))
        .collect::<Result<_>>()?;

    let mut class_samples = vec![Vec::with_capacity(runs.len()); config.params.classes()];
    let mut overall_samples = Vec::with_capacity(runs.len());
    for run in &runs {
        let (per_class, overall) = run.ratios()?;
        for (samples, r) in class_samples.iter_mut().zip(per_class) {
            samples.push(r);
        }
        overall_samples.push(overall);
    }

    Ok(SimEstimate {
        per_class: class_samples
            .iter()
            .map(|s| estimate(s))
            .collect::<Result<_>>()?,
        overall: estimate(&overall_samples)?,
        events_processed: runs.iter().map(|r| r.events).sum(),
        seed_used: config.seed,
    })
}
