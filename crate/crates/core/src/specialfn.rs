//! Standard normal and one-degree-of-freedom chi-square distribution functions.
//!
//! All functions are built on the complementary error function from `libm`
//! (a port of the FreeBSD `s_erf.c` rational approximations, accurate to about
//! one ulp). The chi-square law with one degree of freedom is the law of `Z²`,
//! so `P(χ²₁ > x) = erfc(sqrt(x / 2))` and no incomplete-gamma code is needed.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal upper tail `1 - Φ(x)`, without cancellation for large `x`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal quantile `Φ⁻¹(p)` for `0 < p < 1`.
///
/// Acklam's rational approximation (relative error ~1e-9) followed by two
/// Halley steps against [`normal_cdf`].
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "normal quantile needs 0 < p < 1, got {p}"
        )));
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.02425;

    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    for _ in 0..2 {
        // Work in whichever tail keeps the residual well conditioned.
        let e = if x <= 0.0 {
            normal_cdf(x) - p
        } else {
            (1.0 - p) - normal_sf(x)
        };
        let u = e / normal_pdf(x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    Ok(x)
}

/// `P(χ²₁ > x)`.
pub fn chisq1_sf(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "chi-square survival needs x >= 0, got {x}"
        )));
    }
    Ok(libm::erfc((0.5 * x).sqrt()))
}

/// `P(χ²₁ <= x)`.
pub fn chisq1_cdf(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!(
            "chi-square CDF needs x >= 0, got {x}"
        )));
    }
    Ok(libm::erf((0.5 * x).sqrt()))
}

fn chisq1_pdf(x: f64) -> f64 {
    (-0.5 * x).exp() / (2.0 * PI * x).sqrt()
}

/// Inverse of [`chisq1_cdf`]: the `x` with `P(χ²₁ <= x) = p`.
///
/// Safeguarded Newton on the survival function inside a bracket that is
/// shrunk on every step; falls back to bisection whenever Newton leaves it.
pub fn chisq1_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!(
            "chi-square quantile needs 0 < p < 1, got {p}"
        )));
    }
    let target = 1.0 - p;
    // sf is decreasing: sf(lo) > target > sf(hi).
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while libm::erfc((0.5 * hi).sqrt()) > target {
        lo = hi;
        hi *= 2.0;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let g = libm::erfc((0.5 * x).sqrt()) - target;
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x + g / chisq1_pdf(x);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 1e-14 * x.max(1e-300) || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Upper-α critical value of χ²₁.
pub fn chisq1_critical(alpha: f64) -> Result<f64> {
    chisq1_quantile(1.0 - alpha)
}
