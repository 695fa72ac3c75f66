//! Sweep of per-class offered load `A_i = C` over a `C/k` grid, one
//! simulation per (grid point, distribution) cell, written as CSV tables and
//! one SVG panel per class plus the all-class panel.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use preempt_loss::analytic::analytic_blocking;
use preempt_loss::sim::{simulate, SimConfig, SimEstimate, VictimPolicy};
use preempt_loss::{BlockingReport, SystemParams};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::format::prob;
use crate::options::DistSpec;
use crate::svg::{Chart, Series, PALETTE};

/// Exponential cells further than this many half-widths from the analytic
/// value fail the self-check.
pub const SELF_CHECK_HALFWIDTHS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub servers: usize,
    pub classes: usize,
    /// `C/k` values; `A_i = C` for every class.
    pub grid: Vec<f64>,
    pub distributions: Vec<DistSpec>,
    pub seed: u64,
    pub replications: usize,
    pub arrivals_per_replication: u64,
    pub warmup_fraction: f64,
    pub victim_policy: VictimPolicy,
    pub output_dir: PathBuf,
    pub log_y: bool,
}

/// `points` evenly spaced values `1/points, 2/points, …, 1`.
pub fn even_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|i| i as f64 / points as f64).collect()
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(CliError::Usage("the C/k grid is empty".into()));
        }
        if self.grid[0] <= 0.0 || self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage("the C/k grid must be positive and strictly increasing".into()));
        }
        if self.distributions.is_empty() {
            return Err(CliError::Usage("no distributions given".into()));
        }
        if self.servers == 0 || self.classes == 0 {
            return Err(CliError::Usage("servers and classes must be positive".into()));
        }
        Ok(())
    }

    fn params(&self, c_over_k: f64) -> Result<SystemParams> {
        let c = c_over_k * self.servers as f64;
        Ok(SystemParams::new(self.servers, vec![c; self.classes], 1.0)?)
    }

    fn config(&self, c_over_k: f64, dist: DistSpec) -> Result<SimConfig> {
        let mut cfg = SimConfig::new(self.params(c_over_k)?, dist.resolve(1.0)?, self.seed);
        cfg.replications = self.replications;
        cfg.arrivals_per_replication = self.arrivals_per_replication;
        cfg.warmup_fraction = self.warmup_fraction;
        cfg.victim_policy = self.victim_policy;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub files: Vec<PathBuf>,
    pub self_check_failures: Vec<String>,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    spec.validate()?;
    std::fs::create_dir_all(&spec.output_dir).map_err(|e| CliError::io(&spec.output_dir, e))?;

    let analytic: Vec<BlockingReport> = spec
        .grid
        .iter()
        .map(|&x| Ok(analytic_blocking(&spec.params(x)?)?))
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, usize)> = (0..spec.distributions.len())
        .flat_map(|d| (0..spec.grid.len()).map(move |g| (d, g)))
        .collect();
    let estimates: Vec<SimEstimate> = cells
        .par_iter()
        .map(|&(d, g)| Ok(simulate(&spec.config(spec.grid[g], spec.distributions[d])?)?))
        .collect::<Result<_>>()?;
    let estimate = |d: usize, g: usize| &estimates[d * spec.grid.len() + g];

    let mut files = Vec::new();
    for (d, dist) in spec.distributions.iter().enumerate() {
        let path = spec.output_dir.join(format!("sim_{}.csv", dist.tag()));
        let rows: Vec<&SimEstimate> = (0..spec.grid.len()).map(|g| estimate(d, g)).collect();
        write(&path, &simulation_csv(spec.classes, &spec.grid, &rows))?;
        files.push(path);
    }
    let path = spec.output_dir.join("analytic_exp.csv");
    write(&path, &analytic_csv(spec.classes, &spec.grid, &analytic))?;
    files.push(path);

    for panel in 0..=spec.classes {
        let (name, title) = if panel < spec.classes {
            (format!("panel_class{}.svg", panel + 1), format!("Blocking probability of class {}", panel + 1))
        } else {
            ("panel_total.svg".to_string(), "Blocking probability of all customers".to_string())
        };
        let pick = |e: &SimEstimate| {
            if panel < spec.classes {
                e.per_class[panel].total_ratio
            } else {
                e.overall.total_ratio
            }
        };
        let mut series: Vec<Series> = spec
            .distributions
            .iter()
            .enumerate()
            .map(|(d, dist)| Series {
                name: dist.label(),
                color: PALETTE[d % PALETTE.len()].to_string(),
                dashed: false,
                points: spec.grid.iter().enumerate().map(|(g, &x)| (x, pick(estimate(d, g)))).collect(),
            })
            .collect();
        series.push(Series {
            name: "analytic (exp)".into(),
            color: "#000000".into(),
            dashed: true,
            points: spec
                .grid
                .iter()
                .zip(&analytic)
                .map(|(&x, r)| (x, if panel < spec.classes { r.per_class[panel].total } else { r.overall }))
                .collect(),
        });
        let chart = Chart {
            title,
            x_label: format!("C/k (k = {})", spec.servers),
            y_label: "blocking probability".into(),
            log_y: spec.log_y,
            series,
        };
        let path = spec.output_dir.join(name);
        write(&path, &chart.render())?;
        files.push(path);
    }

    let mut self_check_failures = Vec::new();
    for (d, dist) in spec.distributions.iter().enumerate() {
        if *dist != DistSpec::Exponential {
            continue;
        }
        for (g, &x) in spec.grid.iter().enumerate() {
            let est = estimate(d, g);
            let exact = &analytic[g];
            let pairs = est
                .per_class
                .iter()
                .zip(&exact.per_class)
                .map(|(s, a)| (s.total_ratio, s.ci_halfwidth_95, a.total))
                .chain([(est.overall.total_ratio, est.overall.ci_halfwidth_95, exact.overall)]);
            for (i, (mean, hw, want)) in pairs.enumerate() {
                if (mean - want).abs() > SELF_CHECK_HALFWIDTHS * hw {
                    let which = if i < spec.classes { format!("class {}", i + 1) } else { "overall".into() };
                    self_check_failures.push(format!(
                        "C/k={x}: {which} simulated {mean} ± {hw} vs analytic {want}"
                    ));
                }
            }
        }
    }

    Ok(ExperimentOutcome {
        files,
        self_check_failures,
    })
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn simulation_csv(classes: usize, grid: &[f64], rows: &[&SimEstimate]) -> String {
    let mut out = String::from("c_over_k");
    for n in 1..=classes {
        let _ = write!(out, ",pb{n},pb{n}_ci");
    }
    out.push_str(",pb_total,pb_total_ci\n");
    for (&x, est) in grid.iter().zip(rows) {
        out.push_str(&prob(x));
        for c in &est.per_class {
            let _ = write!(out, ",{},{}", prob(c.total_ratio), prob(c.ci_halfwidth_95));
        }
        let _ = writeln!(out, ",{},{}", prob(est.overall.total_ratio), prob(est.overall.ci_halfwidth_95));
    }
    out
}

fn analytic_csv(classes: usize, grid: &[f64], reports: &[BlockingReport]) -> String {
    let mut out = String::from("c_over_k");
    for n in 1..=classes {
        let _ = write!(out, ",pb{n}");
    }
    out.push_str(",pb_total\n");
    for (&x, r) in grid.iter().zip(reports) {
        out.push_str(&prob(x));
        for c in &r.per_class {
            let _ = write!(out, ",{}", prob(c.total));
        }
        let _ = writeln!(out, ",{}", prob(r.overall));
    }
    out
}
