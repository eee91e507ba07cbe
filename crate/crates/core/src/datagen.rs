//! Two-cause competing-risks generator with sub-distribution functions
//! `F₁(t) = p₁ F(t)^a`, `F₂(t) = F(t) - p₁ F(t)^a`, and exponential baseline
//! `F(t) = 1 - exp(-λ t)`.
//!
//! Draws are two-stage: `T` by inverse transform from `F`, then the cause from
//! `P(J = 1 | T = t) = f₁(t) / f(t) = p₁ a F(t)^(a-1)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{Cause, Observation, Sample};

/// Identifies the random stream layout; bump when draws would change.
pub const GENERATOR_VERSION: &str = "chacha8-splitmix64-v1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    /// Rate of the exponential baseline.
    pub lambda: f64,
    pub p1: f64,
    pub a: f64,
    pub seed: u64,
}

impl FamilyParams {
    pub fn new(lambda: f64, p1: f64, a: f64, seed: u64) -> Result<Self> {
        let p = Self {
            lambda,
            p1,
            a,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("must be positive and finite, got {}", self.lambda),
            });
        }
        if !(0.0..=0.5).contains(&self.p1) {
            return Err(Error::InvalidParameter {
                name: "p1",
                reason: format!("must lie in [0, 0.5], got {}", self.p1),
            });
        }
        if !(1.0..=2.0).contains(&self.a) {
            return Err(Error::InvalidParameter {
                name: "a",
                reason: format!("must lie in [1, 2], got {}", self.a),
            });
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Baseline distribution function `F(t)`.
    pub fn baseline_cdf(&self, t: f64) -> f64 {
        -(-self.lambda * t).exp_m1()
    }

    /// `P(J = 1 | T = t)`.
    pub fn cause1_probability(&self, t: f64) -> f64 {
        self.p1 * self.a * self.baseline_cdf(t).powf(self.a - 1.0)
    }

    /// Cause-1 sub-distribution `F₁(t) = p₁ F(t)^a`.
    pub fn sub_cdf1(&self, t: f64) -> f64 {
        self.p1 * self.baseline_cdf(t).powf(self.a)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `r` of a run seeded with `seed`.
pub fn replication_seed(seed: u64, r: u64) -> u64 {
    splitmix64(seed ^ splitmix64(r.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// Draws `n` iid observations; fully determined by `params` (including seed).
pub fn sample(params: &FamilyParams, n: usize) -> Result<Sample> {
    params.validate()?;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let observations = (0..n).map(|_| draw(params, &mut rng)).collect();
    Sample::new(observations)
}

fn draw<R: Rng>(params: &FamilyParams, rng: &mut R) -> Observation {
    // gen::<f64>() is in [0, 1), so 1 - u is in (0, 1] and the log is finite.
    let u: f64 = rng.gen();
    let time = -(-u).ln_1p() / params.lambda;
    let cause = if rng.gen::<f64>() < params.cause1_probability(time) {
        Cause::One
    } else {
        Cause::Two
    };
    Observation { time, cause }
}

/// Departure measure `∫ (S₁ f₂ - S₂ f₁) dt` under the family, by adaptive
/// Simpson quadrature on `[0, t_max]` with `S(t_max) = 1e-12`.
pub fn true_delta(params: &FamilyParams) -> Result<f64> {
    params.validate()?;
    if params.a == 1.0 || params.p1 == 0.0 {
        return Ok(0.0);
    }
    let FamilyParams { lambda, p1, a, .. } = *params;
    let integrand = |t: f64| {
        let surv = (-lambda * t).exp();
        let cdf = -(-lambda * t).exp_m1();
        let dens = lambda * surv;
        let s1 = p1 * (1.0 - cdf.powf(a));
        let s2 = surv - s1;
        let f1 = p1 * a * cdf.powf(a - 1.0) * dens;
        let f2 = dens - f1;
        s1 * f2 - s2 * f1
    };
    let t_max = -(1e-12f64).ln() / lambda;
    adaptive_simpson(integrand, 0.0, t_max, 1e-8)
}

fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    const MAX_DEPTH: u32 = 60;

    struct Ctx<F> {
        f: F,
        failed: bool,
        // Intervals narrower than this are accepted as is; the integrand is
        // bounded, so they contribute at most `min_width * sup|f|`.
        min_width: f64,
    }

    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        ctx: &mut Ctx<F>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = ((ctx.f)(lm), (ctx.f)(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if diff.abs() <= 15.0 * tol || b - a <= ctx.min_width {
            return left + right + diff / 15.0;
        }
        if depth == 0 {
            ctx.failed = true;
            return left + right + diff / 15.0;
        }
        step(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }

    // Split up front so the first Simpson estimate cannot be fooled by a
    // coincidentally small difference on a very wide interval.
    const PIECES: usize = 64;
    let mut ctx = Ctx {
        f,
        failed: false,
        min_width: 1e-13 * (b - a),
    };
    let width = (b - a) / PIECES as f64;
    let mut total = 0.0;
    for k in 0..PIECES {
        let lo = a + k as f64 * width;
        let hi = lo + width;
        let (flo, fmid, fhi) = ((ctx.f)(lo), (ctx.f)(0.5 * (lo + hi)), (ctx.f)(hi));
        let whole = width / 6.0 * (flo + 4.0 * fmid + fhi);
        total += step(
            &mut ctx,
            lo,
            hi,
            flo,
            fmid,
            fhi,
            whole,
            tol / PIECES as f64,
            MAX_DEPTH,
        );
    }
    if ctx.failed || !total.is_finite() {
        return Err(Error::IntegrationFailure {
            tolerance: tol,
            estimate: total,
        });
    }
    Ok(total)
}
