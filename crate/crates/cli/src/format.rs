use std::fmt::Write as _;

use preempt_loss::sim::SimEstimate;
use preempt_loss::BlockingReport;
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Usage(format!("unknown format {other:?}; expected table, json or csv"))),
        }
    }
}

/// `x` with `digits` significant digits; zero prints with `digits` decimals.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits, 0.0);
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn prob(x: f64) -> String {
    sig(x, 12)
}

#[derive(Debug, Serialize)]
pub struct ClassRow {
    pub class: usize,
    pub p_bn: f64,
    pub p_pn: f64,
    pub p_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_95: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Overall {
    pub p_b: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci_95: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SimMeta {
    pub distribution: String,
    pub seed: u64,
    pub replications: usize,
    pub arrivals_per_replication: u64,
    pub warmup_fraction: f64,
    pub victim: String,
    pub events: u64,
}

#[derive(Debug, Serialize)]
pub struct Document {
    pub engine: &'static str,
    pub servers: usize,
    pub mu: f64,
    pub rates: Vec<f64>,
    pub classes: Vec<ClassRow>,
    pub overall: Overall,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimMeta>,
}

impl Document {
    pub fn from_report(engine: &'static str, servers: usize, mu: f64, rates: &[f64], report: &BlockingReport) -> Self {
        Document {
            engine,
            servers,
            mu,
            rates: rates.to_vec(),
            classes: report
                .per_class
                .iter()
                .enumerate()
                .map(|(i, c)| ClassRow {
                    class: i + 1,
                    p_bn: c.blocked_on_arrival,
                    p_pn: c.preempted,
                    p_b: c.total,
                    ci_95: None,
                })
                .collect(),
            overall: Overall {
                p_b: report.overall,
                ci_95: None,
            },
            simulation: None,
        }
    }

    pub fn from_estimate(servers: usize, mu: f64, rates: &[f64], est: &SimEstimate, meta: SimMeta) -> Self {
        Document {
            engine: "simulate",
            servers,
            mu,
            rates: rates.to_vec(),
            classes: est
                .per_class
                .iter()
                .enumerate()
                .map(|(i, c)| ClassRow {
                    class: i + 1,
                    p_bn: c.blocked_on_arrival_ratio,
                    p_pn: c.preempted_ratio,
                    p_b: c.total_ratio,
                    ci_95: Some(c.ci_halfwidth_95),
                })
                .collect(),
            overall: Overall {
                p_b: est.overall.total_ratio,
                ci_95: Some(est.overall.ci_halfwidth_95),
            },
            simulation: Some(meta),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("document serializes");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        }
    }

    fn with_ci(&self) -> bool {
        self.classes.iter().any(|c| c.ci_95.is_some())
    }

    fn csv(&self) -> String {
        let mut out = String::from("class,p_bn,p_pn,p_b");
        if self.with_ci() {
            out.push_str(",ci_95");
        }
        out.push('\n');
        for c in &self.classes {
            let _ = write!(out, "{},{},{},{}", c.class, prob(c.p_bn), prob(c.p_pn), prob(c.p_b));
            if let Some(ci) = c.ci_95 {
                let _ = write!(out, ",{}", prob(ci));
            }
            out.push('\n');
        }
        out
    }

    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "engine: {}  servers: {}  mu: {}  rates: {}",
            self.engine,
            self.servers,
            self.mu,
            self.rates.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
        );
        if let Some(m) = &self.simulation {
            let _ = writeln!(
                out,
                "distribution: {}  seed: {}  replications: {}  arrivals: {}  warmup: {}  victim: {}  events: {}",
                m.distribution, m.seed, m.replications, m.arrivals_per_replication, m.warmup_fraction, m.victim, m.events
            );
        }
        let ci = self.with_ci();
        let _ = write!(out, "{:<7} {:<16} {:<16} {:<16}", "class", "p_bn", "p_pn", "p_b");
        if ci {
            let _ = write!(out, " {:<16}", "ci_95");
        }
        out.push('\n');
        for c in &self.classes {
            let _ = write!(out, "{:<7} {:<16} {:<16} {:<16}", c.class, prob(c.p_bn), prob(c.p_pn), prob(c.p_b));
            if let Some(w) = c.ci_95 {
                let _ = write!(out, " {:<16}", prob(w));
            }
            out.push('\n');
        }
        let _ = write!(out, "{:<7} {:<16} {:<16} {:<16}", "all", "", "", prob(self.overall.p_b));
        if let Some(w) = self.overall.ci_95 {
            let _ = write!(out, " {:<16}", prob(w));
        }
        out.push('\n');
        out
    }
}
