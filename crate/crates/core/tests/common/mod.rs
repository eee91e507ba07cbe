//! Helpers shared by the integration tests.
#![allow(dead_code)]

use crtest_core::{kernel_sym, Observation, Sample};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Δ̂ by direct enumeration of all unordered pairs, in floating point.
pub fn naive_delta_hat(obs: &[Observation]) -> f64 {
    let n = obs.len();
    let mut s = 0.0;
    for i in 0..n {
        for l in 0..i {
            s += kernel_sym(&obs[i], &obs[l]);
        }
    }
    2.0 * s / (n as f64 * (n as f64 - 1.0))
}

/// Pseudo-values by recomputing every leave-one-out estimate from scratch.
pub fn naive_pseudo_values(obs: &[Observation]) -> Vec<f64> {
    let n = obs.len() as f64;
    let full = naive_delta_hat(obs);
    (0..obs.len())
        .map(|i| {
            let rest: Vec<Observation> = obs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, o)| *o)
                .collect();
            n * full - (n - 1.0) * naive_delta_hat(&rest)
        })
        .collect()
}

/// Random sample with coarse times (to provoke ties) and a random cause mix.
pub fn random_sample(rng: &mut ChaCha8Rng, n: usize) -> Sample {
    let p1: f64 = rng.gen_range(0.05..0.95);
    let coarse = rng.gen_bool(0.5);
    let pairs: Vec<(f64, u8)> = (0..n)
        .map(|_| {
            let t: f64 = rng.gen_range(0.0..10.0);
            let t = if coarse { t.round() } else { t };
            (t, if rng.gen_bool(p1) { 1 } else { 2 })
        })
        .collect();
    Sample::from_pairs(&pairs).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
/// Infinite values count as mass beyond every finite point.
pub fn ks_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = if x.is_finite() { cdf(x) } else { 1.0 };
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}
