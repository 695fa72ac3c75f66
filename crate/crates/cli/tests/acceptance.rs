//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use preempt_loss::analytic::analytic_blocking;
use preempt_loss::ctmc::{
    binomial, build_generator, ctmc_blocking, enumerate_states, solve_stationary, StateVector,
};
use preempt_loss::erlang::{erlang_b, OfferedLoad};
use preempt_loss::sim::{simulate, ClassEstimate, ServiceDistribution, SimConfig};
use preempt_loss::SystemParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_systems() -> Vec<SystemParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    (0..200)
        .map(|_| {
            let k = rng.random_range(1..=8);
            let p = rng.random_range(1..=4);
            let rates = (0..p).map(|_| rng.random_range(0.1..5.0)).collect();
            let mu = rng.random_range(0.2..3.0);
            SystemParams::new(k, rates, mu).unwrap()
        })
        .collect()
}

fn engines_agree(sample: &[SystemParams]) -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for params in sample {
        let a = analytic_blocking(params).unwrap();
        let c = ctmc_blocking(params).unwrap();
        for (x, y) in a.per_class.iter().zip(&c.per_class) {
            worst = worst
                .max((x.blocked_on_arrival - y.blocked_on_arrival).abs())
                .max((x.preempted - y.preempted).abs())
                .max((x.total - y.total).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-10 && secs < 30.0,
        format!("max |ctmc - analytic| = {worst:.2e} over {} systems in {secs:.2} s", sample.len()),
    )
}

fn two_by_two_chain() -> Outcome {
    let params = SystemParams::new(2, vec![1.0, 1.0], 1.0).unwrap();
    let space = enumerate_states(2, 2).unwrap();
    let dist = solve_stationary(&build_generator(&params, &space), &space).unwrap();
    let pi = |i: u32, j: u32| dist.probability(space.index_of(&StateVector::new(vec![i, j])).unwrap());
    let expected = [((0, 0), 0.2), ((2, 0), 0.2), ((1, 1), 0.15), ((0, 2), 0.05)];
    let pi_err = expected.iter().map(|((i, j), v)| (pi(*i, *j) - v).abs()).fold(0.0, f64::max);

    let (l1, l2, mu) = (1.0, 1.0, 1.0);
    let residuals = [
        pi(0, 0) * (l1 + l2) - (pi(1, 0) * mu + pi(0, 1) * mu),
        pi(0, 1) * (l1 + l2 + mu) - (pi(0, 2) * 2.0 * mu + pi(1, 1) * mu + pi(0, 0) * l2),
        pi(0, 2) * (l1 + 2.0 * mu) - pi(0, 1) * l2,
        pi(1, 1) * (l1 + mu) - (pi(1, 0) * l2 + pi(0, 2) * l1),
        pi(1, 0) * (l1 + l2 + mu) - (pi(1, 1) * mu + pi(2, 0) * 2.0 * mu + pi(0, 0) * l1),
        pi(2, 0) * 2.0 * mu - (pi(1, 1) * l1 + pi(1, 0) * l1),
        pi(2, 0) + pi(1, 0) + pi(0, 0) + pi(1, 1) + pi(0, 1) + pi(0, 2) - 1.0,
    ];
    let residual = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    outcome(
        pi_err <= 1e-12 && residual <= 1e-12,
        format!("max |pi - expected| = {pi_err:.2e}, max balance residual = {residual:.2e}"),
    )
}

fn erlang_direct(servers: usize, load: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=servers {
        term *= load / j as f64;
        sum += term;
    }
    term / sum
}

fn erlang_grid() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for k in 1..=30 {
        for step in 1..=334 {
            let a = 20.0 * step as f64 / 334.0;
            let rec = erlang_b(k, OfferedLoad::new(a).unwrap());
            let direct = erlang_direct(k, a);
            worst = worst.max(((rec - direct) / direct).abs());
            points += 1;
        }
    }
    let e53 = erlang_b(5, OfferedLoad::new(3.0).unwrap());
    outcome(
        worst <= 1e-12 && (e53 - 0.110054).abs() <= 1e-6,
        format!("max relative gap {worst:.2e} over {points} points, E_5(3) = {e53:.9}"),
    )
}

fn telescoping(sample: &[SystemParams]) -> Outcome {
    let mut worst: f64 = 0.0;
    for params in sample {
        let loads = params.loads();
        let total: f64 = loads.iter().sum();
        let target = total * erlang_b(params.servers(), OfferedLoad::new(total).unwrap());
        for report in [analytic_blocking(params).unwrap(), ctmc_blocking(params).unwrap()] {
            let lost: f64 = loads.iter().zip(report.totals()).map(|(a, pb)| a * pb).sum();
            worst = worst.max(((lost - target) / target).abs());
        }
    }
    outcome(worst <= 1e-12, format!("max relative gap {worst:.2e} (both engines)"))
}

fn run_sim(load: f64, dist: ServiceDistribution) -> Vec<ClassEstimate> {
    let params = SystemParams::new(5, vec![load; 3], 1.0).unwrap();
    simulate(&SimConfig::new(params, dist, SEED)).unwrap().per_class
}

fn exponential_vs_analytic() -> Outcome {
    let start = Instant::now();
    let params = SystemParams::new(5, vec![3.0; 3], 1.0).unwrap();
    let analytic = analytic_blocking(&params).unwrap().totals();
    let sim = run_sim(3.0, ServiceDistribution::exponential(1.0).unwrap());
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, (est, exact)) in sim.iter().zip(&analytic).enumerate() {
        let inside = (est.total_ratio - exact).abs() <= est.ci_halfwidth_95;
        let narrow = est.ci_halfwidth_95 <= 0.03 * est.total_ratio;
        pass &= inside && narrow;
        parts.push(format!(
            "class {}: {:.5} +/- {:.5} vs {:.5}",
            n + 1,
            est.total_ratio,
            est.ci_halfwidth_95,
            exact
        ));
    }
    parts.push(format!("{:.1} s", start.elapsed().as_secs_f64()));
    outcome(pass, parts.join("; "))
}

struct ShapeRuns {
    names: [&'static str; 4],
    runs: Vec<Vec<ClassEstimate>>,
}

fn shape_runs() -> ShapeRuns {
    let dists = [
        ServiceDistribution::deterministic(1.0).unwrap(),
        ServiceDistribution::exponential(1.0).unwrap(),
        ServiceDistribution::pareto_with_mean(2.001, 1.0).unwrap(),
        ServiceDistribution::pareto_with_mean(1.98, 1.0).unwrap(),
    ];
    ShapeRuns {
        names: ["det", "exp", "pareto-fin", "pareto-inf"],
        runs: dists.into_iter().map(|d| run_sim(4.0, d)).collect(),
    }
}

fn overlap(a: &ClassEstimate, b: &ClassEstimate) -> bool {
    (a.total_ratio - b.total_ratio).abs() <= a.ci_halfwidth_95 + b.ci_halfwidth_95
}

fn class_one_insensitive(shapes: &ShapeRuns) -> Outcome {
    let exact = erlang_b(5, OfferedLoad::new(4.0).unwrap());
    let firsts: Vec<&ClassEstimate> = shapes.runs.iter().map(|r| &r[0]).collect();
    let mut pass = firsts.iter().all(|e| (e.total_ratio - exact).abs() <= e.ci_halfwidth_95);
    for i in 0..firsts.len() {
        for j in i + 1..firsts.len() {
            pass &= overlap(firsts[i], firsts[j]);
        }
    }
    let parts: Vec<String> = shapes
        .names
        .iter()
        .zip(&firsts)
        .map(|(n, e)| format!("{n} {:.5} +/- {:.5}", e.total_ratio, e.ci_halfwidth_95))
        .collect();
    outcome(pass, format!("E_5(4) = {exact:.5}; {}", parts.join(", ")))
}

fn lowest_class_ordering(shapes: &ShapeRuns) -> Outcome {
    let third: Vec<&ClassEstimate> = shapes.runs.iter().map(|r| &r[2]).collect();
    let (det, exp, fin, inf) = (third[0], third[1], third[2], third[3]);
    let above = |a: &ClassEstimate, b: &ClassEstimate| {
        a.total_ratio - a.ci_halfwidth_95 > b.total_ratio + b.ci_halfwidth_95
    };
    let pass = above(det, exp)
        && above(exp, fin)
        && above(det, fin)
        && inf.total_ratio <= fin.total_ratio + inf.ci_halfwidth_95 + fin.ci_halfwidth_95;
    let parts: Vec<String> = shapes
        .names
        .iter()
        .zip(&third)
        .map(|(n, e)| format!("{n} {:.5} +/- {:.5}", e.total_ratio, e.ci_halfwidth_95))
        .collect();
    outcome(pass, format!("class 3 wanted det > exp > pareto-fin >= pareto-inf; {}", parts.join(", ")))
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_preempt-loss"))
        .env_remove("PREEMPT_LOSS_SEED")
        .args(args)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let args = [
        "simulate", "--servers", "3", "--rates", "1,2", "--mu", "1", "--dist", "pareto:1.98", "--seed", "7", "--reps", "4",
        "--arrivals", "20000", "--format", "csv",
    ];
    let first = cli(&args);
    let repeat = first == cli(&args);
    let sim_golden = first == std::fs::read(golden.join("simulate_pareto.csv")).unwrap();

    let dir = std::env::temp_dir().join(format!("preempt-loss-acceptance-{}", std::process::id()));
    cli(&[
        "experiment", "--servers", "2", "--classes", "2", "--points", "3", "--dists", "det,exp", "--seed", "11", "--reps", "3",
        "--arrivals", "20000", "--output-dir", dir.to_str().unwrap(),
    ]);
    let same = |a: &str, b: &str| std::fs::read(dir.join(a)).unwrap() == std::fs::read(golden.join(b)).unwrap();
    let exp_golden = same("sim_det.csv", "experiment_sim_det.csv") && same("analytic_exp.csv", "experiment_analytic_exp.csv");
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        repeat && sim_golden && exp_golden,
        format!("repeat identical: {repeat}, simulate golden: {sim_golden}, experiment golden: {exp_golden}"),
    )
}

fn brute_force(k: u32, p: usize) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let mut x = vec![0u32; p];
    loop {
        if x.iter().sum::<u32>() <= k {
            out.insert(x.clone());
        }
        let mut i = 0;
        loop {
            if i == p {
                return out;
            }
            x[i] += 1;
            if x[i] <= k {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pass = true;
    let mut worst_row: f64 = 0.0;
    let mut cases = 0;
    for k in 1..=10usize {
        for p in 1..=5usize {
            let space = enumerate_states(k, p).unwrap();
            let listed: BTreeSet<Vec<u32>> = space.states().iter().map(|s| s.occupancy().to_vec()).collect();
            pass &= space.len() as u128 == binomial((k + p) as u64, p as u64)
                && listed.len() == space.len()
                && listed == brute_force(k as u32, p);
            let rates = (0..p).map(|_| rng.random_range(0.1..5.0)).collect();
            let params = SystemParams::new(k, rates, rng.random_range(0.2..3.0)).unwrap();
            let q = build_generator(&params, &space);
            let scale = q.max_exit_rate();
            for i in 0..q.dim() {
                worst_row = worst_row.max(q.row_sum(i).abs() / scale);
            }
            cases += 1;
        }
    }
    pass &= worst_row <= 1e-12;
    outcome(pass, format!("{cases} (k, p) pairs, max |row sum| / max rate = {worst_row:.2e}"))
}

fn main() {
    let sample = random_systems();
    let shapes = shape_runs();
    let results = [
        ("1 ctmc and analytic engines agree", engines_agree(&sample)),
        ("2 two-server two-class chain", two_by_two_chain()),
        ("3 Erlang B recursion", erlang_grid()),
        ("4 lost-traffic conservation", telescoping(&sample)),
        ("5 exponential simulation vs analytic", exponential_vs_analytic()),
        ("6 class-1 insensitivity", class_one_insensitive(&shapes)),
        ("7 lowest-class ordering by service shape", lowest_class_ordering(&shapes)),
        ("8 determinism and golden files", determinism()),
        ("9 state space and generator structure", structure()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
