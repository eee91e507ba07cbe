use crtest_core::datagen::{sample, true_delta, FamilyParams};
use crtest_core::Cause;
use proptest::prelude::*;

#[test]
fn marginal_cause_probability_is_p1() {
    for (k, &(lambda, p1, a)) in [
        (0.5, 0.3, 1.0),
        (1.0, 0.5, 2.0),
        (2.0, 0.2, 1.5),
        (1.0, 0.45, 1.9),
    ]
    .iter()
    .enumerate()
    {
        let params = FamilyParams::new(lambda, p1, a, 100 + k as u64).unwrap();
        let n = 100_000;
        let s = sample(&params, n).unwrap();
        let phat = s.count(Cause::One) as f64 / n as f64;
        let se = (p1 * (1.0 - p1) / n as f64).sqrt();
        assert!((phat - p1).abs() < 3.0 * se, "{params:?}: {phat}");
    }
}

#[test]
fn times_follow_the_exponential_baseline() {
    let params = FamilyParams::new(0.5, 0.3, 1.7, 3).unwrap();
    let s = sample(&params, 100_000).unwrap();
    let mean = s.observations().iter().map(|o| o.time).sum::<f64>() / s.len() as f64;
    // Mean 2, sd 2, so the standard error is 2/sqrt(1e5).
    assert!((mean - 2.0).abs() < 3.0 * 2.0 / (1e5f64).sqrt());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn same_seed_same_bytes(seed in any::<u64>(), a in 1.0f64..=2.0, p1 in 0.0f64..=0.5) {
        let params = FamilyParams::new(1.0, p1, a, seed).unwrap();
        let x = serde_json::to_vec(&sample(&params, 25).unwrap()).unwrap();
        let y = serde_json::to_vec(&sample(&params, 25).unwrap()).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn departure_measure_is_nonnegative(a in 1.0f64..=2.0, p1 in 0.0f64..=0.5, lambda in 0.1f64..5.0) {
        let d = true_delta(&FamilyParams::new(lambda, p1, a, 0).unwrap()).unwrap();
        prop_assert!(d >= -1e-9);
    }
}
