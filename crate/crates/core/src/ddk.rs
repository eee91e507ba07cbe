//! Normal-theory comparison test in the style of Dewan, Deshpande and Kulathinal.
//!
//! The statistic is built from the same pair comparisons as the departure
//! estimate, but on the summed-kernel scale: each pair contributes
//! `ψ*(a, b) + ψ*(b, a) ∈ {-1, 0, 1}`, i.e. twice the averaged kernel. On that
//! scale `√n · 2Δ̂` is asymptotically `N(0, (4/3) p₁ (1 - p₁))` under
//! independence, and `p₁` is replaced by the observed cause-1 proportion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{Cause, Sample};
use crate::specialfn::{normal_quantile, normal_sf};
use crate::ustat::delta_hat;

/// Rejection region of the normal test.
///
/// Two-sided is the default: it matches the χ²₁ rule of the JEL test, and
/// with it the power comparison against JEL comes out the way the published
/// tables report it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sidedness {
    /// Reject for large positive `z` (the ordered alternative).
    Upper,
    #[default]
    Two,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DdkTestResult {
    pub z: f64,
    pub p_value: f64,
    pub reject: bool,
    pub p1_hat: f64,
    pub alpha: f64,
    pub sided: Sidedness,
    pub delta_hat: f64,
}

/// Null variance of `√n · 2Δ̂` for a given cause-1 probability.
pub fn null_variance(p1: f64) -> f64 {
    4.0 / 3.0 * p1 * (1.0 - p1)
}

pub fn ddk_test(s: &Sample, alpha: f64, sided: Sidedness) -> Result<DdkTestResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("must lie in (0, 1), got {alpha}"),
        });
    }
    let delta = delta_hat(s)?;
    let n = s.len() as f64;
    let p1_hat = s.count(Cause::One) as f64 / n;
    let var = null_variance(p1_hat);
    if var == 0.0 {
        return Err(Error::DegenerateSample(format!(
            "only one cause present (cause-1 proportion {p1_hat}); null variance is zero"
        )));
    }
    let z = n.sqrt() * 2.0 * delta / var.sqrt();
    let (p_value, reject) = match sided {
        Sidedness::Upper => (normal_sf(z), z > normal_quantile(1.0 - alpha)?),
        Sidedness::Two => (
            (2.0 * normal_sf(z.abs())).min(1.0),
            z.abs() > normal_quantile(1.0 - alpha / 2.0)?,
        ),
    };
    Ok(DdkTestResult {
        z,
        p_value,
        reject,
        p1_hat,
        alpha,
        sided,
        delta_hat: delta,
    })
}
