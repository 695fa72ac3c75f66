//! Agreement of the Markov-chain engine with the closed-form engine.

use preempt_loss::analytic::analytic_blocking;
use preempt_loss::ctmc::{binomial, ctmc_blocking, enumerate_states};
use preempt_loss::SystemParams;
use proptest::prelude::*;

#[test]
fn cardinality_matches_brute_force() {
    for k in 1..=6usize {
        for p in 1..=4usize {
            // count all of [0, k]^p with sum ≤ k
            let total = (0..(k + 1).pow(p as u32))
                .filter(|code| {
                    let mut c = *code;
                    let mut sum = 0;
                    for _ in 0..p {
                        sum += c % (k + 1);
                        c /= k + 1;
                    }
                    sum <= k
                })
                .count();
            let space = enumerate_states(k, p).unwrap();
            assert_eq!(space.len(), total);
            assert_eq!(space.len() as u128, binomial((k + p) as u64, p as u64));
            assert!(space.states().windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn known_two_class_case() {
    let params = SystemParams::new(3, vec![2.0, 1.0], 1.0).unwrap();
    let c = ctmc_blocking(&params).unwrap();
    let a = analytic_blocking(&params).unwrap();
    assert!((c.per_class[1].total - a.per_class[1].total).abs() < 1e-10);
    assert!((c.per_class[1].total - 0.617408906882591).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn engines_agree(
        k in 1usize..9,
        rates in prop::collection::vec(0.1f64..5.0, 1..5),
        mu in 0.2f64..3.0,
    ) {
        let params = SystemParams::new(k, rates, mu).unwrap();
        let c = ctmc_blocking(&params).unwrap();
        let a = analytic_blocking(&params).unwrap();
        for (x, y) in c.per_class.iter().zip(&a.per_class) {
            prop_assert!((x.blocked_on_arrival - y.blocked_on_arrival).abs() <= 1e-10);
            prop_assert!((x.preempted - y.preempted).abs() <= 1e-10);
            prop_assert!((x.total - y.total).abs() <= 1e-10);
        }
        prop_assert!((c.overall - a.overall).abs() <= 1e-10);
    }
}
