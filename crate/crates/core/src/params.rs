use crate::erlang::{erlang_b, OfferedLoad};
use crate::error::{domain, Result};

/// Servers, per-class Poisson arrival rates (index 0 is the highest
/// priority) and the common exponential service rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    servers: usize,
    arrival_rates: Vec<f64>,
    service_rate: f64,
}

impl SystemParams {
    pub fn new(servers: usize, arrival_rates: Vec<f64>, service_rate: f64) -> Result<Self> {
        if servers == 0 {
            return domain("at least one server is required");
        }
        if arrival_rates.is_empty() {
            return domain("at least one priority class is required");
        }
        if let Some((i, r)) = arrival_rates
            .iter()
            .enumerate()
            .find(|(_, r)| !(r.is_finite() && **r > 0.0))
        {
            return domain(format!("arrival rate of class {} must be positive, got {r}", i + 1));
        }
        if !(service_rate.is_finite() && service_rate > 0.0) {
            return domain(format!("service rate must be positive, got {service_rate}"));
        }
        Ok(SystemParams {
            servers,
            arrival_rates,
            service_rate,
        })
    }

    pub fn servers(&self) -> usize {
        self.servers
    }

    pub fn classes(&self) -> usize {
        self.arrival_rates.len()
    }

    pub fn arrival_rates(&self) -> &[f64] {
        &self.arrival_rates
    }

    pub fn service_rate(&self) -> f64 {
        self.service_rate
    }

    pub fn total_arrival_rate(&self) -> f64 {
        self.arrival_rates.iter().sum()
    }

    /// Offered load `A_i` of each class.
    pub fn loads(&self) -> Vec<f64> {
        self.arrival_rates
            .iter()
            .map(|l| l / self.service_rate)
            .collect()
    }

    /// Cumulative loads `Â_0 = 0, Â_1, …, Â_p`; the vector has `p + 1` entries.
    pub fn cumulative_loads(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.classes() + 1);
        out.push(0.0);
        for a in self.loads() {
            acc += a;
            out.push(acc);
        }
        out
    }

    /// `E_k(Â_n)` for `n = 0..=p`.
    pub(crate) fn cumulative_erlang(&self) -> Result<Vec<f64>> {
        self.cumulative_loads()
            .into_iter()
            .map(|a| Ok(erlang_b(self.servers, OfferedLoad::new(a)?)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassBlocking {
    /// `P_bn`: probability an arrival is rejected outright.
    pub blocked_on_arrival: f64,
    /// `P_pn`: probability an admitted customer is later preempted.
    pub preempted: f64,
    /// `P_b = P_bn + P_pn`.
    pub total: f64,
}

/// Per-class blocking probabilities, as produced by every engine.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockingReport {
    pub per_class: Vec<ClassBlocking>,
    /// Arrival-rate-weighted mean of the per-class totals, i.e. lost traffic
    /// over offered traffic.
    pub overall: f64,
    /// Lost traffic `A_L(i) = A_i P_b(i)` in erlangs.
    pub lost_traffic: Vec<f64>,
}

impl BlockingReport {
    pub(crate) fn from_classes(params: &SystemParams, per_class: Vec<ClassBlocking>) -> Self {
        let rates = params.arrival_rates();
        let overall = per_class
            .iter()
            .zip(rates)
            .map(|(c, l)| c.total * l)
            .sum::<f64>()
            / params.total_arrival_rate();
        let lost_traffic = per_class
            .iter()
            .zip(params.loads())
            .map(|(c, a)| c.total * a)
            .collect();
        BlockingReport {
            per_class,
            overall,
            lost_traffic,
        }
    }

    pub fn totals(&self) -> Vec<f64> {
        self.per_class.iter().map(|c| c.total).collect()
    }
}
