//! Testing independence of failure time and failure cause in two-cause
//! competing-risks data.
//!
//! The departure measure `Δ = P(T₁ > T₂, J₁ = 1, J₂ = 2) - P(T₁ > T₂, J₁ = 2, J₂ = 1)`
//! is zero under independence. It is estimated by a degree-two U-statistic
//! ([`ustat`]), turned into jackknife pseudo-values, and tested with a
//! jackknife empirical likelihood ratio calibrated against χ²₁ ([`jel`]). A
//! normal-theory comparison test ([`ddk`]), a generator for the
//! `F₁ = p₁ F^a` family ([`datagen`]) and a Monte Carlo harness ([`mc`]) round
//! out the crate.
//!
//! ```
//! use crtest_core::{jel_test, Sample};
//!
//! let s = Sample::from_pairs(&[(0.4, 2), (1.1, 1), (1.9, 2), (2.5, 1), (3.0, 1)]).unwrap();
//! let r = jel_test(&s, 0.05).unwrap();
//! assert!(r.statistic >= 0.0);
//! ```

pub mod datagen;
pub mod ddk;
pub mod error;
pub mod ingest;
pub mod jel;
pub mod mc;
pub mod report;
pub mod sample;
mod serde_float;
pub mod specialfn;
pub mod ustat;

pub use datagen::FamilyParams;
pub use ddk::{ddk_test, DdkTestResult, Sidedness};
pub use error::{Error, Result};
pub use ingest::{ingest, ColumnRef, IngestSpec, Ingested};
pub use jel::{jel_test, solve_lambda, ElSolution, JelTestResult};
pub use mc::{Method, SimConfig, SimTable};
pub use report::RunReport;
pub use sample::{Cause, Observation, Sample};
pub use ustat::{delta_hat, jackknife, kernel_raw, kernel_sym, JackknifeSet};
