//! Closed-form blocking probabilities from the lost-traffic argument.
//!
//! Classes `1..=n` together see a plain Erlang loss system with offered load
//! `Â_n`, because preemption only reshuffles which of them is served. The
//! traffic lost by class `n` is therefore the difference
//! `Â_n E_k(Â_n) − Â_{n−1} E_k(Â_{n−1})`.

use crate::error::{domain, Result};
use crate::params::{BlockingReport, ClassBlocking, SystemParams};

/// Lost traffic `A_L(i)` of class `class_index` (1-based), in erlangs.
pub fn lost_traffic(params: &SystemParams, class_index: usize) -> Result<f64> {
    if class_index == 0 || class_index > params.classes() {
        return domain(format!(
            "class index {class_index} outside 1..={}",
            params.classes()
        ));
    }
    let hat = params.cumulative_loads();
    let e = params.cumulative_erlang()?;
    let lost = hat[class_index] * e[class_index] - hat[class_index - 1] * e[class_index - 1];
    // A·E_k(A) is nondecreasing in A; allow only rounding noise below zero.
    debug_assert!(lost >= -1e-12 * hat[class_index].max(1.0));
    Ok(lost.max(0.0))
}

/// Per-class blocking from the lost-traffic ratio `P_b(i) = A_L(i) / A_i`.
///
/// The ratio is evaluated in the split form
/// `E_k(Â_i) + (Â_{i−1}/A_i)(E_k(Â_i) − E_k(Â_{i−1}))`, whose first term is
/// the blocked-on-arrival part and whose second is the preemption part.
pub fn analytic_blocking(params: &SystemParams) -> Result<BlockingReport> {
    let hat = params.cumulative_loads();
    let e = params.cumulative_erlang()?;
    let per_class = params
        .loads()
        .iter()
        .enumerate()
        .map(|(idx, &a)| {
            let n = idx + 1;
            let blocked_on_arrival = e[n];
            let preempted = (hat[n - 1] / a * (e[n] - e[n - 1])).max(0.0);
            ClassBlocking {
                blocked_on_arrival,
                preempted,
                total: blocked_on_arrival + preempted,
            }
        })
        .collect();
    let mut report = BlockingReport::from_classes(params, per_class);
    for (i, slot) in report.lost_traffic.iter_mut().enumerate() {
        *slot = lost_traffic(params, i + 1)?;
    }
    Ok(report)
}
