use crate::params::{BlockingReport, ClassBlocking, SystemParams};

use super::solve::StationaryDistribution;
use super::state::StateSpace;

/// Reads per-class blocking off the stationary distribution.
///
/// A class-`n` arrival is rejected exactly when classes `1..=n` fill all `k`
/// servers, so `P_bn(n) = π(Σ_{i≤n} X_i = k)`. A class-`n` customer is
/// displaced when a higher class arrives while the system is full and class
/// `n` is the lowest one present, which is the event
/// `{Σ_{i≤n} X_i = k} \ {Σ_{i<n} X_i = k}`; the displacement rate divided by
/// `λ_n` gives `P_pn(n)`.
pub fn extract_blocking(
    params: &SystemParams,
    space: &StateSpace,
    dist: &StationaryDistribution,
) -> BlockingReport {
    let p = params.classes();
    let k = params.servers() as u32;

    // full_up_to[n] = π(Σ_{i≤n} X_i = k), with full_up_to[0] = 0. A full
    // prefix stays full for every longer prefix since later entries are 0.
    let mut full_up_to = vec![0.0; p + 1];
    for (state, &prob) in space.states().iter().zip(dist.probabilities()) {
        let mut busy = 0;
        for (i, &x) in state.occupancy().iter().enumerate() {
            busy += x;
            if busy == k {
                full_up_to[i + 1] += prob;
            }
        }
    }
    let rates = params.arrival_rates();
    let mut higher_rate = 0.0;
    let per_class = (1..=p)
        .map(|n| {
            let blocked_on_arrival = full_up_to[n];
            let preempted = higher_rate / rates[n - 1] * (full_up_to[n] - full_up_to[n - 1]).max(0.0);
            higher_rate += rates[n - 1];
            ClassBlocking {
                blocked_on_arrival,
                preempted,
                total: blocked_on_arrival + preempted,
            }
        })
        .collect();
    BlockingReport::from_classes(params, per_class)
}
