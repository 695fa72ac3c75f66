//! The multidimensional Markov chain of occupancy vectors `(X_1, …, X_p)`.
//!
//! The generator is assembled event by event (admitted arrival, preemption
//! of the lowest occupied class, departure); the global balance equations
//! for non-congestion, congestion and boundary states are a consequence of
//! that construction and are checked in the tests rather than transcribed.

mod blocking;
mod generator;
mod solve;
mod state;

pub use blocking::extract_blocking;
pub use generator::{build_generator, Generator};
pub use solve::{solve_stationary, solve_stationary_with, SolverOptions, StationaryDistribution};
pub use state::{binomial, enumerate_states, enumerate_states_with_cap, StateSpace, StateVector, DEFAULT_STATE_CAP};

use crate::error::Result;
use crate::params::{BlockingReport, SystemParams};

/// Enumerates, builds, solves and extracts in one call.
pub fn ctmc_blocking(params: &SystemParams) -> Result<BlockingReport> {
    let space = enumerate_states(params.servers(), params.classes())?;
    let generator = build_generator(params, &space);
    let dist = solve_stationary(&generator, &space)?;
    Ok(extract_blocking(params, &space, &dist))
}
