//! `preempt-loss`: blocking probabilities of a k-server loss system with
//! preemptive priority classes, by closed form, Markov chain or simulation.

mod config;
mod error;
mod experiment;
mod format;
mod options;
mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use preempt_loss::analytic::analytic_blocking;
use preempt_loss::ctmc::{build_generator, enumerate_states, extract_blocking, solve_stationary, StateSpace, StationaryDistribution};
use preempt_loss::erlang::{erlang_b, OfferedLoad};
use preempt_loss::sim::{simulate, SimConfig};
use preempt_loss::SystemParams;

use config::FileConfig;
use error::{CliError, Result};
use experiment::{even_grid, run_experiment, ExperimentSpec};
use format::{prob, Document, Format, SimMeta};
use options::{parse_dists, parse_rates, parse_victim, victim_name, DistSpec};

#[derive(Debug, Parser)]
#[command(name = "preempt-loss", version, about = "Blocking in multi-server loss systems with preemptive priorities")]
struct Cli {
    /// TOML file with default flag values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Erlang B blocking probability E_k(A).
    Erlang(ErlangArgs),
    /// Closed-form per-class blocking.
    Analytic(SystemArgs),
    /// Per-class blocking from the solved Markov chain.
    Ctmc(CtmcArgs),
    /// Discrete-event simulation with a general service distribution.
    Simulate(SimulateArgs),
    /// Load sweep over all distributions, written as CSV and SVG.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ErlangArgs {
    #[arg(long)]
    servers: Option<usize>,
    /// Offered load in erlangs.
    #[arg(long)]
    load: Option<f64>,
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[arg(long)]
    servers: Option<usize>,
    /// Comma-separated arrival rates, highest priority first.
    #[arg(long)]
    rates: Option<String>,
    /// Service rate (1 / mean service time).
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args)]
struct CtmcArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Write the stationary distribution as CSV.
    #[arg(long, value_name = "PATH")]
    dump_dist: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimFlags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// Arrivals per replication, warm-up included.
    #[arg(long)]
    arrivals: Option<u64>,
    /// Fraction of arrivals discarded as warm-up.
    #[arg(long)]
    warmup: Option<f64>,
    /// random | newest | oldest
    #[arg(long)]
    victim: Option<String>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// det | exp | pareto:SHAPE
    #[arg(long)]
    dist: Option<String>,
    #[command(flatten)]
    sim: SimFlags,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long)]
    servers: Option<usize>,
    #[arg(long)]
    classes: Option<usize>,
    /// Number of evenly spaced C/k grid points in (0, 1].
    #[arg(long)]
    points: Option<usize>,
    /// Comma-separated distribution tags.
    #[arg(long)]
    dists: Option<String>,
    #[command(flatten)]
    sim: SimFlags,
    #[arg(long, value_name = "DIR")]
    output_dir: Option<PathBuf>,
    /// Logarithmic y axis in the SVG panels.
    #[arg(long)]
    log_y: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Erlang(args) => cmd_erlang(&args, &file),
        Command::Analytic(args) => cmd_analytic(&args, &file),
        Command::Ctmc(args) => cmd_ctmc(&args, &file),
        Command::Simulate(args) => cmd_simulate(&args, &file),
        Command::Experiment(args) => cmd_experiment(&args, &file),
    }
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("--{name} is required (flag or config file)")))
}

fn cmd_erlang(args: &ErlangArgs, file: &FileConfig) -> Result<()> {
    let servers = required(args.servers, file.servers, "servers")?;
    let load = OfferedLoad::new(required(args.load, file.load, "load")?)?;
    println!("{}", prob(erlang_b(servers, load)));
    Ok(())
}

struct System {
    params: SystemParams,
    format: Format,
}

fn system(args: &SystemArgs, file: &FileConfig) -> Result<System> {
    let servers = required(args.servers, file.servers, "servers")?;
    let rates = match &args.rates {
        Some(s) => parse_rates(s)?,
        None => file.rates.clone().ok_or_else(|| CliError::Usage("--rates is required (flag or config file)".into()))?,
    };
    let mu = args.mu.or(file.mu).unwrap_or(1.0);
    let format = match (args.format, &file.format) {
        (Some(f), _) => f,
        (None, Some(s)) => s.parse()?,
        (None, None) => Format::Table,
    };
    Ok(System {
        params: SystemParams::new(servers, rates, mu)?,
        format,
    })
}

fn cmd_analytic(args: &SystemArgs, file: &FileConfig) -> Result<()> {
    let sys = system(args, file)?;
    let report = analytic_blocking(&sys.params)?;
    let p = &sys.params;
    let doc = Document::from_report("analytic", p.servers(), p.service_rate(), p.arrival_rates(), &report);
    print!("{}", doc.render(sys.format));
    Ok(())
}

fn cmd_ctmc(args: &CtmcArgs, file: &FileConfig) -> Result<()> {
    let sys = system(&args.system, file)?;
    let p = &sys.params;
    let space = enumerate_states(p.servers(), p.classes())?;
    let generator = build_generator(p, &space);
    let dist = solve_stationary(&generator, &space)?;
    if let Some(path) = &args.dump_dist {
        dump_distribution(path, &space, &dist)?;
    }
    let report = extract_blocking(p, &space, &dist);
    let doc = Document::from_report("ctmc", p.servers(), p.service_rate(), p.arrival_rates(), &report);
    print!("{}", doc.render(sys.format));
    Ok(())
}

fn dump_distribution(path: &Path, space: &StateSpace, dist: &StationaryDistribution) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> = (1..=space.classes()).map(|i| format!("X_{i}")).collect();
    let _ = writeln!(out, "{},probability", header.join(","));
    for (state, p) in space.states().iter().zip(dist.probabilities()) {
        let cols: Vec<String> = state.occupancy().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{},{}", cols.join(","), prob(*p));
    }
    std::fs::write(path, out).map_err(|e| CliError::io(path, e))
}

struct SimSettings {
    seed: u64,
    replications: usize,
    arrivals: u64,
    warmup: f64,
    victim: preempt_loss::sim::VictimPolicy,
}

fn sim_settings(flags: &SimFlags, file: &FileConfig) -> Result<SimSettings> {
    let seed = match flags.seed {
        Some(s) => s,
        None => file.default_seed()?,
    };
    let victim = match flags.victim.as_deref().or(file.victim.as_deref()) {
        Some(v) => parse_victim(v)?,
        None => Default::default(),
    };
    Ok(SimSettings {
        seed,
        replications: flags.reps.or(file.reps).unwrap_or(SimConfig::DEFAULT_REPLICATIONS),
        arrivals: flags.arrivals.or(file.arrivals).unwrap_or(SimConfig::DEFAULT_ARRIVALS),
        warmup: flags.warmup.or(file.warmup).unwrap_or(SimConfig::DEFAULT_WARMUP),
        victim,
    })
}

fn cmd_simulate(args: &SimulateArgs, file: &FileConfig) -> Result<()> {
    let sys = system(&args.system, file)?;
    let tag: DistSpec = args.dist.as_deref().or(file.dist.as_deref()).unwrap_or("exp").parse()?;
    let settings = sim_settings(&args.sim, file)?;
    let p = &sys.params;
    let mut config = SimConfig::new(p.clone(), tag.resolve(p.service_rate())?, settings.seed);
    config.replications = settings.replications;
    config.arrivals_per_replication = settings.arrivals;
    config.warmup_fraction = settings.warmup;
    config.victim_policy = settings.victim;
    let est = simulate(&config)?;
    let meta = SimMeta {
        distribution: tag.to_string(),
        seed: est.seed_used,
        replications: config.replications,
        arrivals_per_replication: config.arrivals_per_replication,
        warmup_fraction: config.warmup_fraction,
        victim: victim_name(config.victim_policy).to_string(),
        events: est.events_processed,
    };
    let doc = Document::from_estimate(p.servers(), p.service_rate(), p.arrival_rates(), &est, meta);
    print!("{}", doc.render(sys.format));
    Ok(())
}

fn cmd_experiment(args: &ExperimentArgs, file: &FileConfig) -> Result<()> {
    let settings = sim_settings(&args.sim, file)?;
    let distributions = match (&args.dists, &file.dists) {
        (Some(s), _) => parse_dists(s)?,
        (None, Some(list)) => list.iter().map(|s| s.parse()).collect::<Result<_>>()?,
        (None, None) => parse_dists("det,exp,pareto:2.001,pareto:1.98")?,
    };
    let spec = ExperimentSpec {
        servers: args.servers.or(file.servers).unwrap_or(5),
        classes: args.classes.or(file.classes).unwrap_or(3),
        grid: even_grid(args.points.or(file.points).unwrap_or(20)),
        distributions,
        seed: settings.seed,
        replications: settings.replications,
        arrivals_per_replication: settings.arrivals,
        warmup_fraction: settings.warmup,
        victim_policy: settings.victim,
        output_dir: args
            .output_dir
            .clone()
            .or_else(|| file.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("experiment-out")),
        log_y: args.log_y || file.log_y.unwrap_or(false),
    };
    let outcome = run_experiment(&spec)?;
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    if !outcome.self_check_failures.is_empty() {
        return Err(CliError::SelfCheck(outcome.self_check_failures.join("\n")));
    }
    println!("self-check passed: exponential cells within {} half-widths of the analytic values", experiment::SELF_CHECK_HALFWIDTHS);
    Ok(())
}
