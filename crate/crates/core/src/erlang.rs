//! Erlang B evaluation and offered-traffic arithmetic.

use crate::error::{domain, Result};

/// Offered traffic in erlangs (`arrival rate / service rate`).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct OfferedLoad(f64);

impl OfferedLoad {
    pub fn new(erlangs: f64) -> Result<Self> {
        if !erlangs.is_finite() || erlangs < 0.0 {
            return domain(format!("offered load must be finite and nonnegative, got {erlangs}"));
        }
        Ok(OfferedLoad(erlangs))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Offered load of a Poisson stream with rate `arrival_rate` served at
/// `service_rate`.
pub fn offered_load(arrival_rate: f64, service_rate: f64) -> Result<OfferedLoad> {
    if !(service_rate > 0.0) || !service_rate.is_finite() {
        return domain(format!("service rate must be positive, got {service_rate}"));
    }
    if !(arrival_rate >= 0.0) {
        return domain(format!("arrival rate must be nonnegative, got {arrival_rate}"));
    }
    OfferedLoad::new(arrival_rate / service_rate)
}

/// Erlang B blocking probability `E_k(A)` of an M/M/k/k system.
///
/// Uses the recursion `E_0 = 1`, `E_m = A E_{m-1} / (m + A E_{m-1})`, which
/// stays in `[0, 1]` for any `k` and never forms a factorial. Zero servers
/// block everything, including at zero load.
pub fn erlang_b(servers: usize, load: OfferedLoad) -> f64 {
    let a = load.value();
    let mut e = 1.0;
    for m in 1..=servers {
        let ae = a * e;
        e = ae / (m as f64 + ae);
    }
    e
}
