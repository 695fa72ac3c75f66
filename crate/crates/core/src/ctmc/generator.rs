use crate::params::SystemParams;

use super::state::{StateSpace, StateVector};

/// Sparse infinitesimal generator: off-diagonal rates per row plus the
/// diagonal, which holds the negated row sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    rows: Vec<Vec<(usize, f64)>>,
    diagonal: Vec<f64>,
}

impl Generator {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Off-diagonal transitions out of `from` as `(to, rate)` pairs.
    pub fn row(&self, from: usize) -> &[(usize, f64)] {
        &self.rows[from]
    }

    pub fn diagonal(&self, state: usize) -> f64 {
        self.diagonal[state]
    }

    pub fn rate(&self, from: usize, to: usize) -> f64 {
        if from == to {
            return self.diagonal[from];
        }
        self.rows[from]
            .iter()
            .filter(|(j, _)| *j == to)
            .map(|(_, r)| r)
            .sum()
    }

    pub fn transition_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Largest total exit rate of any state.
    pub fn max_exit_rate(&self) -> f64 {
        self.diagonal.iter().fold(0.0, |m, d| m.max(-d))
    }

    /// Sum of row `i` including the diagonal (zero up to rounding).
    pub fn row_sum(&self, i: usize) -> f64 {
        self.diagonal[i] + self.rows[i].iter().map(|(_, r)| r).sum::<f64>()
    }

    /// The row vector `x Q`.
    pub fn left_multiply(&self, x: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = x.iter().zip(&self.diagonal).map(|(a, d)| a * d).collect();
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, r) in row {
                out[j] += x[i] * r;
            }
        }
        out
    }
}

/// Builds the generator event by event.
///
/// From state `X` with `n = ΣX_i` busy servers:
/// * a class-`i` arrival at rate `λ_i` is admitted if `n < k`; if the system
///   is full and the lowest occupied class `l(X)` is below `i` in priority,
///   one class-`l(X)` customer is displaced; otherwise it is blocked and
///   there is no transition;
/// * each class-`i` customer departs at rate `μ`.
pub fn build_generator(params: &SystemParams, space: &StateSpace) -> Generator {
    assert_eq!(params.servers(), space.servers(), "params and state space disagree on k");
    assert_eq!(params.classes(), space.classes(), "params and state space disagree on p");

    let k = params.servers() as u32;
    let mu = params.service_rate();
    let rates = params.arrival_rates();

    let mut rows = Vec::with_capacity(space.len());
    let mut diagonal = Vec::with_capacity(space.len());
    let mut scratch = Vec::with_capacity(space.classes());

    for state in space.states() {
        let x = state.occupancy();
        let full = state.busy() == k;
        let lowest = state.lowest_occupied();
        let mut row = Vec::new();

        for (i, &lambda) in rates.iter().enumerate() {
            scratch.clear();
            scratch.extend_from_slice(x);
            if !full {
                scratch[i] += 1;
            } else {
                match lowest {
                    Some(l) if l > i => {
                        scratch[l] -= 1;
                        scratch[i] += 1;
                    }
                    _ => continue,
                }
            }
            row.push((target(space, &scratch), lambda));
        }

        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            scratch.clear();
            scratch.extend_from_slice(x);
            scratch[i] -= 1;
            row.push((target(space, &scratch), xi as f64 * mu));
        }

        diagonal.push(-row.iter().map(|(_, r)| r).sum::<f64>());
        rows.push(row);
    }

    Generator { rows, diagonal }
}

fn target(space: &StateSpace, occupancy: &[u32]) -> usize {
    space
        .index_of(&StateVector::new(occupancy.to_vec()))
        .expect("transition leaves the state space")
}
