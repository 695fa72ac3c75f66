use std::fmt;

use crate::error::{domain, Error, Result};

pub const DEFAULT_STATE_CAP: usize = 200_000;

/// Busy servers per class; entry `i` counts class `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateVector(Vec<u32>);

impl StateVector {
    pub fn new(occupancy: Vec<u32>) -> Self {
        StateVector(occupancy)
    }

    pub fn occupancy(&self) -> &[u32] {
        &self.0
    }

    pub fn busy(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Busy servers held by classes `1..=n`.
    pub fn busy_up_to(&self, n: usize) -> u32 {
        self.0[..n].iter().sum()
    }

    /// Lowest-priority class (0-based) with a customer in service.
    pub fn lowest_occupied(&self) -> Option<usize> {
        self.0.iter().rposition(|&x| x > 0)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All occupancy vectors with at most `k` busy servers, in lexicographic
/// order. Dense ids are positions in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    servers: usize,
    classes: usize,
    states: Vec<StateVector>,
}

impl StateSpace {
    pub fn servers(&self) -> usize {
        self.servers
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn state(&self, id: usize) -> &StateVector {
        &self.states[id]
    }

    pub fn index_of(&self, state: &StateVector) -> Option<usize> {
        self.states.binary_search(state).ok()
    }
}

/// `binomial(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn enumerate_states(servers: usize, classes: usize) -> Result<StateSpace> {
    enumerate_states_with_cap(servers, classes, DEFAULT_STATE_CAP)
}

pub fn enumerate_states_with_cap(servers: usize, classes: usize, cap: usize) -> Result<StateSpace> {
    if servers == 0 || classes == 0 {
        return domain("state space needs k >= 1 and p >= 1");
    }
    let required = binomial((servers + classes) as u64, classes as u64);
    if required > cap as u128 {
        return Err(Error::Capacity { required, cap });
    }
    let mut states = Vec::with_capacity(required as usize);
    let mut current = vec![0u32; classes];
    fill(&mut current, 0, servers as u32, &mut states);
    debug_assert_eq!(states.len() as u128, required);
    Ok(StateSpace {
        servers,
        classes,
        states,
    })
}

fn fill(current: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<StateVector>) {
    if pos == current.len() {
        out.push(StateVector(current.clone()));
        return;
    }
    for x in 0..=remaining {
        current[pos] = x;
        fill(current, pos + 1, remaining - x, out);
    }
    current[pos] = 0;
}
