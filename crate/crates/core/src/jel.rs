//! Jackknife empirical likelihood over pseudo-values.
//!
//! For a hypothesized mean `delta0` the optimal weights are
//! `p_i = 1 / (n (1 + λ d_i))` with `d_i = V_i - delta0`, where `λ` solves
//! `(1/n) Σ d_i / (1 + λ d_i) = 0`. The log ratio against uniform weights is
//! `-Σ log(1 + λ d_i)` and `-2` times it is calibrated against χ²₁.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::specialfn::{chisq1_critical, chisq1_sf};
use crate::ustat::{jackknife, JackknifeSet};

/// Residual tolerance on the Lagrange equation.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Iteration cap for the safeguarded Newton solve.
pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElSolution {
    pub lambda: f64,
    pub weights: Vec<f64>,
    pub log_ratio: f64,
    pub iterations: usize,
    pub residual: f64,
}

// Mean estimating function and its derivative in λ.
fn estimating_eq(dev: &[f64], lambda: f64) -> (f64, f64) {
    let n = dev.len() as f64;
    let (mut g, mut dg) = (0.0, 0.0);
    for &d in dev {
        let denom = 1.0 + lambda * d;
        let r = d / denom;
        g += r;
        dg -= r * r;
    }
    (g / n, dg / n)
}

/// Solves for the Lagrange multiplier at `delta0`.
///
/// The estimating equation is strictly decreasing in `λ`, so the root is
/// bracketed by the values at which some weight would reach 1; Newton steps
/// that leave the (shrinking) bracket are replaced by bisection.
pub fn solve_lambda(pseudo_values: &[f64], delta0: f64) -> Result<ElSolution> {
    let n = pseudo_values.len();
    if n < 2 {
        return Err(Error::SampleTooSmall { needed: 2, got: n });
    }
    let dev: Vec<f64> = pseudo_values.iter().map(|v| v - delta0).collect();
    let nf = n as f64;

    // Uniform weights already satisfy the constraint.
    if dev.iter().all(|&d| d == 0.0) {
        return Ok(ElSolution {
            lambda: 0.0,
            weights: vec![1.0 / nf; n],
            log_ratio: 0.0,
            iterations: 0,
            residual: 0.0,
        });
    }

    let min = dev.iter().copied().fold(f64::INFINITY, f64::min);
    let max = dev.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(min < 0.0 && max > 0.0) {
        return Err(Error::HullViolation {
            delta0,
            min: min + delta0,
            max: max + delta0,
        });
    }

    // 1 + λ d_i >= 1/n for every i keeps each weight at most 1.
    let shrink = 1.0 - 1.0 / nf;
    let mut lo = -shrink / max;
    let mut hi = -shrink / min;

    let mut lambda = 0.0;
    let mut iterations = 0;
    let (mut g, mut dg) = estimating_eq(&dev, lambda);
    // The weights sum to 1 - λ g, so the residual is scaled by |λ| as well.
    while g.abs() * lambda.abs().max(1.0) > RESIDUAL_TOL {
        if iterations == MAX_ITERATIONS {
            return Err(Error::NoConvergence {
                iterations,
                residual: g.abs(),
            });
        }
        iterations += 1;
        if g > 0.0 {
            lo = lo.max(lambda);
        } else {
            hi = hi.min(lambda);
        }
        let newton = lambda - g / dg;
        lambda = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        (g, dg) = estimating_eq(&dev, lambda);
    }

    let weights = dev
        .iter()
        .map(|&d| 1.0 / (nf * (1.0 + lambda * d)))
        .collect();
    let log_ratio = -dev.iter().map(|&d| (lambda * d).ln_1p()).sum::<f64>();
    Ok(ElSolution {
        lambda,
        weights,
        log_ratio: log_ratio.min(0.0),
        iterations,
        residual: g.abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JelTestResult {
    /// `-2 l(0)`; infinite when zero lies outside the pseudo-value range.
    #[serde(with = "crate::serde_float")]
    pub statistic: f64,
    pub p_value: f64,
    pub reject: bool,
    pub alpha: f64,
    pub delta_hat: f64,
    pub hull_ok: bool,
    /// Every pseudo-value was exactly zero; the statistic is defined as 0.
    pub degenerate: bool,
    pub el: Option<ElSolution>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("must lie in (0, 1), got {alpha}"),
        })
    }
}

/// JEL test of a zero departure measure on a sample (`n >= 3`).
pub fn jel_test(s: &Sample, alpha: f64) -> Result<JelTestResult> {
    check_alpha(alpha)?;
    let jk = jackknife(s)?;
    jel_test_pseudo(&jk, alpha)
}

/// Same as [`jel_test`] for precomputed pseudo-values.
pub fn jel_test_pseudo(jk: &JackknifeSet, alpha: f64) -> Result<JelTestResult> {
    check_alpha(alpha)?;
    let critical = chisq1_critical(alpha)?;
    let base = JelTestResult {
        statistic: 0.0,
        p_value: 1.0,
        reject: false,
        alpha,
        delta_hat: jk.delta_hat,
        hull_ok: true,
        degenerate: false,
        el: None,
    };
    if jk.pseudo_values.iter().all(|&v| v == 0.0) {
        return Ok(JelTestResult {
            degenerate: true,
            ..base
        });
    }
    match solve_lambda(&jk.pseudo_values, 0.0) {
        Ok(el) => {
            let statistic = (-2.0 * el.log_ratio).max(0.0);
            Ok(JelTestResult {
                statistic,
                p_value: chisq1_sf(statistic)?,
                reject: statistic > critical,
                el: Some(el),
                ..base
            })
        }
        Err(Error::HullViolation { .. }) => Ok(JelTestResult {
            statistic: f64::INFINITY,
            p_value: 0.0,
            reject: true,
            hull_ok: false,
            ..base
        }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_pseudo_values_give_zero_lambda() {
        let el = solve_lambda(&[-1.0, 0.0, 1.0], 0.0).unwrap();
        assert_eq!(el.lambda, 0.0);
        assert_eq!(el.log_ratio, 0.0);
    }

    #[test]
    fn closed_form_three_point_solve() {
        // (1/3)[-1/(1-λ) + 2/(1+λ)] = 0  =>  λ = 1/3.
        let el = solve_lambda(&[-1.0, 1.0, 1.0], 0.0).unwrap();
        assert!((el.lambda - 1.0 / 3.0).abs() < 1e-10);
        let expected = -((2.0f64 / 3.0).ln() + 2.0 * (4.0f64 / 3.0).ln());
        assert!((el.log_ratio - expected).abs() < 1e-12);
        assert!((el.log_ratio + 0.169899).abs() < 1e-6);
        assert!(el.residual <= RESIDUAL_TOL);
    }

    #[test]
    fn constant_pseudo_values_at_their_value() {
        let el = solve_lambda(&[0.7, 0.7, 0.7], 0.7).unwrap();
        assert_eq!(el.lambda, 0.0);
        assert!(el.weights.iter().all(|&w| (w - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn hull_violation_detected() {
        assert!(matches!(
            solve_lambda(&[0.2, 0.5, 1.0], 0.0),
            Err(Error::HullViolation { .. })
        ));
        assert!(matches!(
            solve_lambda(&[-1.0, 0.0, 1.0], 1.0),
            Err(Error::HullViolation { .. })
        ));
        assert!(matches!(
            solve_lambda(&[1.0], 0.0),
            Err(Error::SampleTooSmall { .. })
        ));
    }

    #[test]
    fn test_on_closed_form_pseudo_values() {
        let jk = JackknifeSet {
            delta_hat: 1.0 / 3.0,
            pseudo_values: vec![-1.0, 1.0, 1.0],
            n: 3,
        };
        let r = jel_test_pseudo(&jk, 0.05).unwrap();
        assert!((r.statistic - 0.339798).abs() < 1e-6);
        // erfc(sqrt(0.339798.../2)) evaluated at 30 digits.
        assert!((r.p_value - 0.559_945_800_853_630_6).abs() < 1e-10);
        assert!(!r.reject);
        assert!(r.hull_ok);
    }

    #[test]
    fn hull_violation_rejects_with_infinite_statistic() {
        let jk = JackknifeSet {
            delta_hat: 0.5,
            pseudo_values: vec![0.2, 0.5, 0.8],
            n: 3,
        };
        let r = jel_test_pseudo(&jk, 0.05).unwrap();
        assert!(r.statistic.is_infinite());
        assert_eq!(r.p_value, 0.0);
        assert!(r.reject && !r.hull_ok);
    }

    #[test]
    fn single_cause_sample_is_degenerate_accept() {
        let s = Sample::from_pairs(&[(1.0, 1), (2.0, 1), (3.0, 1), (4.0, 1)]).unwrap();
        let r = jel_test(&s, 0.05).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.statistic, 0.0);
        assert!(!r.reject);
    }

    #[test]
    fn bad_alpha_is_rejected() {
        let s = Sample::from_pairs(&[(1.0, 1), (2.0, 2), (3.0, 1)]).unwrap();
        assert!(jel_test(&s, 0.0).is_err());
        assert!(jel_test(&s, 1.0).is_err());
    }

    #[test]
    fn statistic_json_round_trip_keeps_infinity() {
        let jk = JackknifeSet {
            delta_hat: 0.5,
            pseudo_values: vec![0.2, 0.5, 0.8],
            n: 3,
        };
        let r = jel_test_pseudo(&jk, 0.05).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: JelTestResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
