//! Monte Carlo size and power study for the JEL and DDK tests.
//!
//! Replication `r` of every grid cell draws its sample from the seed
//! `replication_seed(seed, r)`, so cells share common random numbers across
//! `a` and `n`, and results do not depend on how work is scheduled.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{self, replication_seed, FamilyParams, GENERATOR_VERSION};
use crate::ddk::{self, Sidedness};
use crate::error::{Error, Result};
use crate::jel::jel_test_pseudo;
use crate::sample::{Cause, Sample};
use crate::specialfn::{chisq1_critical, normal_quantile};
use crate::ustat::jackknife;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable capping the worker count (`0` or unset = automatic).
pub const THREADS_ENV: &str = "CRTEST_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Jel,
    Ddk,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Jel => "JEL",
            Method::Ddk => "DDK",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jel" => Ok(Method::Jel),
            "ddk" => Ok(Method::Ddk),
            _ => Err(Error::InvalidParameter {
                name: "method",
                reason: format!("expected `jel` or `ddk`, got `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Baseline rate, cause-1 probability and master seed. `params.a` is
    /// ignored in favour of `a_grid`.
    pub params: FamilyParams,
    pub n_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub a_grid: Vec<f64>,
    pub reps: usize,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub ddk_sided: Sidedness,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason: String| Err(Error::InvalidParameter { name, reason });
        if self.reps < 100 {
            return bad("reps", format!("must be at least 100, got {}", self.reps));
        }
        if self.n_grid.is_empty() || self.alpha_grid.is_empty() || self.a_grid.is_empty() {
            return bad("grid", "n, alpha and a grids must be non-empty".into());
        }
        if self.methods.is_empty() {
            return bad("methods", "at least one method is required".into());
        }
        if let Some(n) = self.n_grid.iter().find(|&&n| n < 3) {
            return bad(
                "n",
                format!("every sample size must be at least 3, got {n}"),
            );
        }
        if let Some(al) = self.alpha_grid.iter().find(|&&al| !(al > 0.0 && al < 1.0)) {
            return bad("alpha", format!("every alpha must lie in (0, 1), got {al}"));
        }
        for &a in &self.a_grid {
            self.params_for(a).validate()?;
        }
        Ok(())
    }

    fn params_for(&self, a: f64) -> FamilyParams {
        FamilyParams { a, ..self.params }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimCell {
    pub method: Method,
    pub a: f64,
    pub n: usize,
    pub alpha: f64,
    pub rate: f64,
    pub stderr: f64,
    pub rejections: u64,
    /// Replications entering the denominator.
    pub used: u64,
    /// Replications where the test is undefined (single-cause samples, or a
    /// Lagrange solve that failed to converge).
    pub excluded: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMetadata {
    pub schema_version: u32,
    pub seed: u64,
    pub reps: usize,
    pub lambda: f64,
    pub p1: f64,
    pub generator: String,
    pub ddk_sided: Sidedness,
    pub wall_time_secs: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTable {
    pub cells: Vec<SimCell>,
    pub metadata: SimMetadata,
}

impl SimTable {
    pub fn cell(&self, method: Method, a: f64, n: usize, alpha: f64) -> Option<&SimCell> {
        self.cells
            .iter()
            .find(|c| c.method == method && c.a == a && c.n == n && c.alpha == alpha)
    }

    /// CSV with header `method,a,n,alpha,rate,stderr,excluded`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["method", "a", "n", "alpha", "rate", "stderr", "excluded"])
            .map_err(io)?;
        for c in &self.cells {
            w.write_record([
                c.method.name().to_string(),
                c.a.to_string(),
                c.n.to_string(),
                c.alpha.to_string(),
                format!("{:.6}", c.rate),
                format!("{:.6}", c.stderr),
                c.excluded.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Monte Carlo standard error of a rejection fraction.
pub fn mc_stderr(rate: f64, reps: u64) -> f64 {
    if reps == 0 {
        0.0
    } else {
        (rate * (1.0 - rate) / reps as f64).sqrt()
    }
}

/// Worker count from [`THREADS_ENV`]; `None` means let rayon decide.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = configured_threads() {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Io(e.to_string()))
}

// Per-replication outcome: statistic for each requested method, `None` when
// the test is undefined on that sample.
struct Replicate {
    jel: Option<f64>,
    ddk: Option<f64>,
}

fn has_both_causes(s: &Sample) -> bool {
    let ones = s.count(Cause::One);
    ones > 0 && ones < s.len()
}

fn replicate(params: &FamilyParams, n: usize, methods: &[Method]) -> Result<Replicate> {
    let s = datagen::sample(params, n)?;
    let mut out = Replicate {
        jel: None,
        ddk: None,
    };
    if !has_both_causes(&s) {
        return Ok(out);
    }
    if methods.contains(&Method::Jel) {
        let jk = jackknife(&s)?;
        out.jel = match jel_test_pseudo(&jk, 0.05) {
            Ok(r) => Some(r.statistic),
            Err(Error::NoConvergence { .. }) => None,
            Err(e) => return Err(e),
        };
    }
    if methods.contains(&Method::Ddk) {
        out.ddk = Some(ddk::ddk_test(&s, 0.05, Sidedness::Upper)?.z);
    }
    Ok(out)
}

/// Runs every `(method, a, n, alpha)` cell of the configuration.
pub fn run(config: &SimConfig) -> Result<SimTable> {
    config.validate()?;
    let start = Instant::now();
    let pool = thread_pool()?;
    let methods: BTreeSet<Method> = config.methods.iter().copied().collect();
    let methods: Vec<Method> = methods.into_iter().collect();

    let jel_crit = config
        .alpha_grid
        .iter()
        .map(|&al| chisq1_critical(al))
        .collect::<Result<Vec<_>>>()?;
    let ddk_crit = config
        .alpha_grid
        .iter()
        .map(|&al| match config.ddk_sided {
            Sidedness::Upper => normal_quantile(1.0 - al),
            Sidedness::Two => normal_quantile(1.0 - al / 2.0),
        })
        .collect::<Result<Vec<_>>>()?;
    let ddk_rejects = |z: f64, crit: f64| match config.ddk_sided {
        Sidedness::Upper => z > crit,
        Sidedness::Two => z.abs() > crit,
    };

    let mut cells = Vec::new();
    for &a in &config.a_grid {
        let params = config.params_for(a);
        for &n in &config.n_grid {
            let outcomes = pool.install(|| {
                (0..config.reps as u64)
                    .into_par_iter()
                    .map(|r| {
                        let p = params.with_seed(replication_seed(config.params.seed, r));
                        replicate(&p, n, &methods)
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            for &method in &methods {
                let stats: Vec<Option<f64>> = outcomes
                    .iter()
                    .map(|o| match method {
                        Method::Jel => o.jel,
                        Method::Ddk => o.ddk,
                    })
                    .collect();
                let used = stats.iter().flatten().count() as u64;
                let excluded = config.reps as u64 - used;
                for (k, &alpha) in config.alpha_grid.iter().enumerate() {
                    let rejections = stats
                        .iter()
                        .flatten()
                        .filter(|&&x| match method {
                            Method::Jel => x > jel_crit[k],
                            Method::Ddk => ddk_rejects(x, ddk_crit[k]),
                        })
                        .count() as u64;
                    let rate = if used == 0 {
                        0.0
                    } else {
                        rejections as f64 / used as f64
                    };
                    cells.push(SimCell {
                        method,
                        a,
                        n,
                        alpha,
                        rate,
                        stderr: mc_stderr(rate, used),
                        rejections,
                        used,
                        excluded,
                    });
                }
            }
        }
    }

    Ok(SimTable {
        cells,
        metadata: SimMetadata {
            schema_version: SCHEMA_VERSION,
            seed: config.params.seed,
            reps: config.reps,
            lambda: config.params.lambda,
            p1: config.params.p1,
            generator: GENERATOR_VERSION.to_string(),
            ddk_sided: config.ddk_sided,
            wall_time_secs: start.elapsed().as_secs_f64(),
            threads: pool.current_num_threads(),
        },
    })
}

/// JEL statistics `-2 l(0)` for `reps` replications at one design point;
/// single-cause replications are skipped.
pub fn jel_statistics(params: &FamilyParams, n: usize, reps: usize) -> Result<Vec<f64>> {
    params.validate()?;
    let pool = thread_pool()?;
    let stats = pool.install(|| {
        (0..reps as u64)
            .into_par_iter()
            .map(|r| {
                let p = params.with_seed(replication_seed(params.seed, r));
                replicate(&p, n, &[Method::Jel]).map(|o| o.jel)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(stats.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(reps: usize) -> SimConfig {
        SimConfig {
            params: FamilyParams::new(0.5, 0.3, 1.0, 7).unwrap(),
            n_grid: vec![20, 40],
            alpha_grid: vec![0.01, 0.05],
            a_grid: vec![1.0, 1.9],
            reps,
            methods: vec![Method::Jel, Method::Ddk],
            ddk_sided: Sidedness::Upper,
        }
    }

    #[test]
    fn validation() {
        assert!(config(99).validate().is_err());
        let mut c = config(100);
        c.n_grid = vec![2];
        assert!(c.validate().is_err());
        let mut c = config(100);
        c.alpha_grid = vec![1.0];
        assert!(c.validate().is_err());
        let mut c = config(100);
        c.a_grid = vec![2.5];
        assert!(c.validate().is_err());
        let mut c = config(100);
        c.methods.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_run_has_every_cell_and_valid_rates() {
        let t = run(&config(100)).unwrap();
        assert_eq!(t.cells.len(), 2 * 2 * 2 * 2);
        for c in &t.cells {
            assert!((0.0..=1.0).contains(&c.rate));
            assert_eq!(c.used + c.excluded, 100);
            assert!((c.stderr - mc_stderr(c.rate, c.used)).abs() < 1e-15);
        }
        assert_eq!(t.metadata.generator, GENERATOR_VERSION);
    }

    #[test]
    fn csv_has_expected_header() {
        let t = run(&config(100)).unwrap();
        let csv = t.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("method,a,n,alpha,rate,stderr,excluded"));
        assert_eq!(lines.count(), t.cells.len());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("JEL".parse::<Method>().unwrap(), Method::Jel);
        assert_eq!("ddk".parse::<Method>().unwrap(), Method::Ddk);
        assert!("kendall".parse::<Method>().is_err());
    }
}
