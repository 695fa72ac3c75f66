use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

use super::generator::Generator;
use super::state::StateSpace;

/// Controls the stationary solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Chains with more states than this use uniformized power iteration
    /// instead of a dense LU factorization.
    pub dense_threshold: usize,
    /// Maximum admissible balance residual `max |πQ|`.
    pub tolerance: f64,
    /// Power iteration stops once `max |π_{t+1} − π_t|` drops to this.
    pub power_step_tolerance: f64,
    pub max_power_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            dense_threshold: 5_000,
            tolerance: 1e-10,
            power_step_tolerance: 1e-12,
            max_power_iterations: 2_000_000,
        }
    }
}

/// Stationary probabilities aligned with the state-space ids.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    probabilities: Vec<f64>,
    residual: f64,
}

impl StationaryDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, id: usize) -> f64 {
        self.probabilities[id]
    }

    /// `max |πQ|` measured before clamping.
    pub fn residual(&self) -> f64 {
        self.residual
    }
}

pub fn solve_stationary(generator: &Generator, space: &StateSpace) -> Result<StationaryDistribution> {
    solve_stationary_with(generator, space, &SolverOptions::default())
}

pub fn solve_stationary_with(
    generator: &Generator,
    space: &StateSpace,
    options: &SolverOptions,
) -> Result<StationaryDistribution> {
    assert_eq!(generator.dim(), space.len(), "generator and state space sizes differ");
    let pi = if space.len() <= options.dense_threshold {
        dense_solve(generator)?
    } else {
        power_iteration(generator, options)?
    };
    finish(generator, pi, options.tolerance)
}

/// Solves `Qᵀ πᵀ = 0` with the balance equation of state 0 (the empty
/// system) replaced by `Σπ = 1`.
fn dense_solve(generator: &Generator) -> Result<Vec<f64>> {
    let n = generator.dim();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = generator.diagonal(i);
        for &(j, r) in generator.row(i) {
            a[(j, i)] += r;
        }
    }
    a.row_mut(0).fill(1.0);
    let mut b = DVector::<f64>::zeros(n);
    b[0] = 1.0;
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Solver("balance system is singular".into()))?;
    Ok(x.iter().copied().collect())
}

/// Power iteration on the uniformized chain `P = I + Q/Λ`.
fn power_iteration(generator: &Generator, options: &SolverOptions) -> Result<Vec<f64>> {
    let n = generator.dim();
    // Λ strictly above the largest exit rate keeps P aperiodic.
    let uniform_rate = generator.max_exit_rate() * 1.05;
    if !(uniform_rate > 0.0) {
        return Err(Error::Solver("generator has no transitions".into()));
    }
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..options.max_power_iterations {
        for (j, v) in next.iter_mut().enumerate() {
            *v = pi[j] * (1.0 + generator.diagonal(j) / uniform_rate);
        }
        for (i, &p) in pi.iter().enumerate() {
            for &(j, r) in generator.row(i) {
                next[j] += p * r / uniform_rate;
            }
        }
        let total: f64 = next.iter().sum();
        let mut step: f64 = 0.0;
        for (v, old) in next.iter_mut().zip(&pi) {
            *v /= total;
            step = step.max((*v - old).abs());
        }
        std::mem::swap(&mut pi, &mut next);
        if step <= options.power_step_tolerance {
            return Ok(pi);
        }
    }
    Err(Error::Solver(format!(
        "power iteration did not converge in {} iterations",
        options.max_power_iterations
    )))
}

fn finish(generator: &Generator, mut pi: Vec<f64>, tolerance: f64) -> Result<StationaryDistribution> {
    let residual = generator
        .left_multiply(&pi)
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if !residual.is_finite() || residual > tolerance {
        return Err(Error::Solver(format!(
            "balance residual {residual:e} exceeds tolerance {tolerance:e}"
        )));
    }
    if let Some(p) = pi.iter().find(|p| **p < -1e-13) {
        return Err(Error::Solver(format!("negative stationary probability {p:e}")));
    }
    for p in &mut pi {
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    Ok(StationaryDistribution {
        probabilities: pi,
        residual,
    })
}
