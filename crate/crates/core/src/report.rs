//! Run reports for a single test on an ingested file.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ddk::{ddk_test, DdkTestResult, Sidedness};
use crate::error::{Error, Result};
use crate::ingest::Ingested;
use crate::jel::{jel_test, JelTestResult};
use crate::mc::{Method, SCHEMA_VERSION};
use crate::specialfn::{chisq1_critical, normal_quantile};

/// Levels always reported alongside the requested one.
pub const REPORTED_ALPHAS: [f64; 3] = [0.01, 0.05, 0.10];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestOutcome {
    Jel(JelTestResult),
    Ddk(DdkTestResult),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDecision {
    pub alpha: f64,
    pub critical_value: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub method: Method,
    pub result: TestOutcome,
    pub decisions: Vec<LevelDecision>,
    pub n_used: usize,
    pub n_dropped: usize,
    pub input_fingerprint: String,
    pub tool_version: String,
}

impl RunReport {
    /// Runs `method` on an ingested sample.
    pub fn build(data: &Ingested, method: Method, alpha: f64, sided: Sidedness) -> Result<Self> {
        let result = match method {
            Method::Jel => TestOutcome::Jel(jel_test(&data.sample, alpha)?),
            Method::Ddk => TestOutcome::Ddk(ddk_test(&data.sample, alpha, sided)?),
        };
        let mut alphas = REPORTED_ALPHAS.to_vec();
        if !alphas.contains(&alpha) {
            alphas.push(alpha);
            alphas.sort_by(f64::total_cmp);
        }
        let decisions = alphas
            .into_iter()
            .map(|al| decision(&result, al))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            method,
            result,
            decisions,
            n_used: data.sample.len(),
            n_dropped: data.n_dropped,
            input_fingerprint: data.fingerprint.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        })
    }

    pub fn rows_parsed(&self) -> usize {
        self.n_used + self.n_dropped
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "method:        {}", self.method.name());
        let _ = writeln!(out, "n used:        {}", self.n_used);
        let _ = writeln!(out, "n dropped:     {}", self.n_dropped);
        match &self.result {
            TestOutcome::Jel(r) => {
                let _ = writeln!(out, "delta hat:     {:.6}", r.delta_hat);
                let _ = writeln!(out, "statistic:     {:.4}", r.statistic);
                let _ = writeln!(out, "p-value:       {:.4}", r.p_value);
                if !r.hull_ok {
                    let _ = writeln!(
                        out,
                        "note:          zero lies outside the pseudo-value range"
                    );
                }
                if r.degenerate {
                    let _ = writeln!(out, "note:          all pseudo-values are zero");
                }
                if let Some(el) = &r.el {
                    let _ = writeln!(
                        out,
                        "lambda:        {:.6e} ({} iterations)",
                        el.lambda, el.iterations
                    );
                }
                let _ = writeln!(out, "alpha:         {}", r.alpha);
                let _ = writeln!(out, "reject H0:     {}", r.reject);
            }
            TestOutcome::Ddk(r) => {
                let _ = writeln!(out, "delta hat:     {:.6}", r.delta_hat);
                let _ = writeln!(out, "p1 hat:        {:.4}", r.p1_hat);
                let _ = writeln!(out, "z:             {:.4}", r.z);
                let _ = writeln!(out, "p-value:       {:.4}", r.p_value);
                let _ = writeln!(out, "alpha:         {}", r.alpha);
                let _ = writeln!(out, "reject H0:     {}", r.reject);
            }
        }
        for d in &self.decisions {
            let _ = writeln!(
                out,
                "  alpha={:<5} critical={:.4} reject={}",
                d.alpha, d.critical_value, d.reject
            );
        }
        let _ = writeln!(out, "input sha256:  {}", self.input_fingerprint);
        out
    }
}

fn decision(result: &TestOutcome, alpha: f64) -> Result<LevelDecision> {
    Ok(match result {
        TestOutcome::Jel(r) => {
            let critical_value = chisq1_critical(alpha)?;
            LevelDecision {
                alpha,
                critical_value,
                reject: r.statistic > critical_value,
            }
        }
        TestOutcome::Ddk(r) => match r.sided {
            Sidedness::Upper => {
                let critical_value = normal_quantile(1.0 - alpha)?;
                LevelDecision {
                    alpha,
                    critical_value,
                    reject: r.z > critical_value,
                }
            }
            Sidedness::Two => {
                let critical_value = normal_quantile(1.0 - alpha / 2.0)?;
                LevelDecision {
                    alpha,
                    critical_value,
                    reject: r.z.abs() > critical_value,
                }
            }
        },
    })
}
