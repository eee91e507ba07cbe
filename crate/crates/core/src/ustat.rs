//! Kernel, U-statistic estimate of the departure measure, and jackknife
//! pseudo-values.
//!
//! The departure measure is
//! `P(T1 > T2, J1 = 1, J2 = 2) - P(T1 > T2, J1 = 2, J2 = 1)`, which is zero
//! when failure time and cause are independent and positive when the
//! conditional probability of cause 1 among survivors increases with time.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sample::{Cause, Observation, Sample};

/// Asymmetric kernel: `+1` when the later failure is cause 1 and the earlier
/// cause 2, `-1` for the reverse, `0` otherwise. Tied times score 0.
pub fn kernel_raw(a: &Observation, b: &Observation) -> i8 {
    if a.time > b.time {
        match (a.cause, b.cause) {
            (Cause::One, Cause::Two) => 1,
            (Cause::Two, Cause::One) => -1,
            _ => 0,
        }
    } else {
        0
    }
}

/// Symmetrized kernel, the average of both argument orders.
pub fn kernel_sym(a: &Observation, b: &Observation) -> f64 {
    f64::from(kernel_pair_sum(a, b)) / 2.0
}

// Twice the symmetric kernel; integer valued in {-1, 0, 1}.
#[inline]
fn kernel_pair_sum(a: &Observation, b: &Observation) -> i32 {
    i32::from(kernel_raw(a, b)) + i32::from(kernel_raw(b, a))
}

/// Pair sums shared by the estimate and the jackknife.
///
/// Everything is held as integer multiples of 1/2 so accumulation is exact.
struct PairSums {
    /// Sum over i < l of `2 * kernel_sym`.
    total: i64,
    /// `rows[i]` = sum over l != i of `2 * kernel_sym(obs_i, obs_l)`.
    rows: Vec<i64>,
}

fn pair_sums(obs: &[Observation]) -> PairSums {
    let n = obs.len();
    let mut rows = vec![0i64; n];
    let mut total = 0i64;
    for i in 0..n {
        for l in (i + 1)..n {
            let k = i64::from(kernel_pair_sum(&obs[i], &obs[l]));
            rows[i] += k;
            rows[l] += k;
            total += k;
        }
    }
    PairSums { total, rows }
}

// Δ̂ from a doubled pair total over m observations.
#[inline]
fn estimate_from_total(total2: i64, m: usize) -> f64 {
    let m = m as f64;
    total2 as f64 / (m * (m - 1.0))
}

/// U-statistic estimate of the departure measure. Needs `n >= 2`.
pub fn delta_hat(s: &Sample) -> Result<f64> {
    s.require_len(2)?;
    let obs = s.observations();
    let mut total = 0i64;
    for i in 0..obs.len() {
        for l in (i + 1)..obs.len() {
            total += i64::from(kernel_pair_sum(&obs[i], &obs[l]));
        }
    }
    Ok(estimate_from_total(total, obs.len()))
}

/// Full-sample estimate plus the jackknife pseudo-values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JackknifeSet {
    pub delta_hat: f64,
    pub pseudo_values: Vec<f64>,
    pub n: usize,
}

impl JackknifeSet {
    /// Average of the pseudo-values (the jackknife estimate).
    pub fn jackknife_mean(&self) -> f64 {
        self.pseudo_values.iter().sum::<f64>() / self.n as f64
    }
}

/// Jackknife pseudo-values `V_i = n Δ̂_n - (n-1) Δ̂_{n-1,i}`.
///
/// Each leave-one-out estimate is recovered from the full pair total minus the
/// row sum of the removed observation, so the whole set costs one O(n²) sweep.
pub fn jackknife(s: &Sample) -> Result<JackknifeSet> {
    s.require_len(3)?;
    let obs = s.observations();
    let n = obs.len();
    let sums = pair_sums(obs);
    let full = estimate_from_total(sums.total, n);
    let nf = n as f64;
    let pseudo_values = sums
        .rows
        .iter()
        .map(|&row| {
            let loo = estimate_from_total(sums.total - row, n - 1);
            nf * full - (nf - 1.0) * loo
        })
        .collect();
    Ok(JackknifeSet {
        delta_hat: full,
        pseudo_values,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(t: f64, c: u8) -> Observation {
        Observation::from_pair(t, c)
    }

    fn sample(p: &[(f64, u8)]) -> Sample {
        Sample::from_pairs(p).unwrap()
    }

    #[test]
    fn raw_kernel_branches() {
        assert_eq!(kernel_raw(&o(3.0, 1), &o(2.0, 2)), 1);
        assert_eq!(kernel_raw(&o(3.0, 2), &o(2.0, 1)), -1);
        assert_eq!(kernel_raw(&o(2.0, 1), &o(2.0, 2)), 0);
        assert_eq!(kernel_raw(&o(3.0, 2), &o(2.0, 2)), 0);
        assert_eq!(kernel_raw(&o(1.0, 1), &o(2.0, 2)), 0);
    }

    #[test]
    fn symmetric_kernel_values() {
        assert_eq!(kernel_sym(&o(1.0, 2), &o(2.0, 1)), 0.5);
        assert_eq!(kernel_sym(&o(1.0, 1), &o(2.0, 1)), 0.0);
        assert_eq!(kernel_sym(&o(2.0, 2), &o(1.0, 1)), -0.5);
    }

    #[test]
    fn delta_hat_small_cases() {
        assert_eq!(delta_hat(&sample(&[(1.0, 2), (2.0, 1)])).unwrap(), 0.5);
        assert_eq!(
            delta_hat(&sample(&[(1.0, 1), (2.0, 2), (3.0, 1)])).unwrap(),
            0.0
        );
        assert_eq!(
            delta_hat(&sample(&[(1.0, 1), (5.0, 1), (3.0, 1)])).unwrap(),
            0.0
        );
    }

    #[test]
    fn too_small_samples_error() {
        assert!(matches!(
            delta_hat(&sample(&[(1.0, 1)])),
            Err(crate::Error::SampleTooSmall { needed: 2, got: 1 })
        ));
        assert!(matches!(
            jackknife(&sample(&[(1.0, 1), (2.0, 2)])),
            Err(crate::Error::SampleTooSmall { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn jackknife_three_point_example() {
        let jk = jackknife(&sample(&[(1.0, 1), (2.0, 2), (3.0, 1)])).unwrap();
        assert_eq!(jk.delta_hat, 0.0);
        assert_eq!(jk.pseudo_values, vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn identical_observations_give_zero_pseudo_values() {
        let jk = jackknife(&sample(&[(2.0, 1); 6])).unwrap();
        assert!(jk.pseudo_values.iter().all(|&v| v == 0.0));
        let jk = jackknife(&sample(&[(2.0, 2), (2.0, 1), (2.0, 2), (2.0, 1)])).unwrap();
        assert!(jk.pseudo_values.iter().all(|&v| v == 0.0));
    }
}
