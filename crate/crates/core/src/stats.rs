//! Independent-replication estimators with Student-t confidence intervals.

use statrs::function::beta::beta_reg;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Half-width of the two-sided confidence interval around `mean`.
    pub ci_halfwidth_95: f64,
}

/// CDF of Student's t distribution with `dof` degrees of freedom.
pub fn t_cdf(t: f64, dof: f64) -> f64 {
    let x = dof / (dof + t * t);
    let tail = 0.5 * beta_reg(0.5 * dof, 0.5, x);
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Quantile of Student's t distribution, found by bisecting [`t_cdf`].
pub fn t_quantile(probability: f64, dof: f64) -> Result<f64> {
    if !(probability > 0.0 && probability < 1.0) {
        return domain(format!("probability must lie in (0, 1), got {probability}"));
    }
    if !(dof > 0.0) {
        return domain(format!("degrees of freedom must be positive, got {dof}"));
    }
    if probability == 0.5 {
        return Ok(0.0);
    }
    if probability < 0.5 {
        return t_quantile(1.0 - probability, dof).map(|t| -t);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while t_cdf(hi, dof) < probability {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t_cdf(mid, dof) < probability {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Sample mean and `t_{(1+c)/2, n−1} · s/√n` half-width.
pub fn t_confidence(samples: &[f64], confidence: f64) -> Result<SampleSummary> {
    let n = samples.len();
    if n < 2 {
        return domain(format!("a confidence interval needs at least 2 samples, got {n}"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return domain(format!("confidence must lie in (0, 1), got {confidence}"));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (nf - 1.0);
    let t = t_quantile(0.5 * (1.0 + confidence), nf - 1.0)?;
    Ok(SampleSummary {
        count: n,
        mean,
        ci_halfwidth_95: t * (var / nf).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn quantiles_against_reference_values() {
        // reference values from an independent statistics library
        let cases = [
            (0.975, 1.0, 12.706204736432095),
            (0.975, 4.0, 2.7764451051977987),
            (0.975, 19.0, 2.093024054408263),
            (0.995, 7.0, 3.4994832973505026),
            (0.9, 3.0, 1.6377443536962095),
        ];
        for (p, dof, expected) in cases {
            let t = t_quantile(p, dof).unwrap();
            assert!((t - expected).abs() < 1e-8, "t({p}, {dof}) = {t}, want {expected}");
        }
        assert!((t_quantile(0.975, 1e7).unwrap() - 1.959963984540054).abs() < 1e-6);
        assert!((t_quantile(0.025, 4.0).unwrap() + 2.7764451051977987).abs() < 1e-8);
    }

    #[test]
    fn constant_samples_have_zero_width() {
        let s = t_confidence(&[0.25, 0.25], 0.95).unwrap();
        assert_eq!(s.mean, 0.25);
        assert_eq!(s.ci_halfwidth_95, 0.0);
    }

    #[test]
    fn hand_computed_intervals() {
        let s = t_confidence(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.95).unwrap();
        assert_eq!(s.mean, 3.0);
        assert!((s.ci_halfwidth_95 - 1.963).abs() < 1e-3);
        let s = t_confidence(&[0.0, 1.0], 0.95).unwrap();
        assert!((s.ci_halfwidth_95 - 6.353).abs() < 1e-3);
    }

    #[test]
    fn rejects_short_input() {
        assert!(t_confidence(&[], 0.95).is_err());
        assert!(t_confidence(&[1.0], 0.95).is_err());
        assert!(t_confidence(&[1.0, 2.0], 1.0).is_err());
        assert!(t_quantile(0.0, 3.0).is_err());
    }

    #[test]
    fn halfwidth_shrinks_like_inverse_sqrt_n() {
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut width = |n: usize| {
            let reps = 200;
            (0..reps)
                .map(|_| {
                    let xs: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
                    t_confidence(&xs, 0.95).unwrap().ci_halfwidth_95
                })
                .sum::<f64>()
                / reps as f64
        };
        let w100 = width(100);
        let w400 = width(400);
        let ratio = w100 / w400;
        assert!((ratio - 2.0).abs() < 0.15, "ratio {ratio}");
    }

    #[test]
    fn coverage_near_nominal() {
        let normal = Normal::new(3.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let hits = (0..1000)
            .filter(|_| {
                let xs: Vec<f64> = (0..10).map(|_| normal.sample(&mut rng)).collect();
                let s = t_confidence(&xs, 0.95).unwrap();
                (s.mean - 3.0).abs() <= s.ci_halfwidth_95
            })
            .count();
        assert!((930..=970).contains(&hits), "coverage {hits}/1000");
    }
}
