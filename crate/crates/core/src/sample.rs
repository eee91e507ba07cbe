//! Observations and validated samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Failure cause in the two-cause setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cause {
    One,
    Two,
}

impl Cause {
    pub fn from_label(label: u8) -> Option<Self> {
        match label {
            1 => Some(Cause::One),
            2 => Some(Cause::Two),
            _ => None,
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Cause::One => 1,
            Cause::Two => 2,
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            Cause::One => Cause::Two,
            Cause::Two => Cause::One,
        }
    }
}

/// One subject's failure time and cause.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub time: f64,
    pub cause: Cause,
}

impl Observation {
    pub fn new(time: f64, cause: Cause) -> Result<Self> {
        if !(time.is_finite() && time >= 0.0) {
            return Err(Error::InvalidObservation {
                index: 0,
                reason: format!("time must be finite and nonnegative, got {time}"),
            });
        }
        Ok(Self { time, cause })
    }

    /// Shorthand for tests and fixtures: `obs(3.0, 1)`.
    ///
    /// Panics on an invalid cause label or time.
    pub fn from_pair(time: f64, cause: u8) -> Self {
        let cause = Cause::from_label(cause).expect("cause label must be 1 or 2");
        Self::new(time, cause).expect("valid time")
    }
}

/// A validated, ordered collection of observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    observations: Vec<Observation>,
}

impl Sample {
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        for (index, o) in observations.iter().enumerate() {
            if !(o.time.is_finite() && o.time >= 0.0) {
                return Err(Error::InvalidObservation {
                    index,
                    reason: format!("time must be finite and nonnegative, got {}", o.time),
                });
            }
        }
        Ok(Self { observations })
    }

    /// Builds a sample from `(time, cause_label)` pairs.
    pub fn from_pairs(pairs: &[(f64, u8)]) -> Result<Self> {
        let observations = pairs
            .iter()
            .enumerate()
            .map(|(index, &(time, label))| {
                let cause = Cause::from_label(label).ok_or_else(|| Error::InvalidObservation {
                    index,
                    reason: format!("cause must be 1 or 2, got {label}"),
                })?;
                Ok(Observation { time, cause })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(observations)
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn count(&self, cause: Cause) -> usize {
        self.observations
            .iter()
            .filter(|o| o.cause == cause)
            .count()
    }

    /// Same sample with causes 1 and 2 exchanged.
    pub fn with_swapped_causes(&self) -> Self {
        Self {
            observations: self
                .observations
                .iter()
                .map(|o| Observation {
                    time: o.time,
                    cause: o.cause.swapped(),
                })
                .collect(),
        }
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(Error::SampleTooSmall {
                needed,
                got: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_nan_times() {
        assert!(Sample::from_pairs(&[(1.0, 1), (-0.5, 2)]).is_err());
        assert!(Sample::from_pairs(&[(f64::NAN, 1)]).is_err());
        assert!(Sample::from_pairs(&[(1.0, 3)]).is_err());
    }

    #[test]
    fn counts_by_cause() {
        let s = Sample::from_pairs(&[(1.0, 1), (2.0, 2), (3.0, 1)]).unwrap();
        assert_eq!(s.count(Cause::One), 2);
        assert_eq!(s.count(Cause::Two), 1);
        let swapped = s.with_swapped_causes();
        assert_eq!(swapped.count(Cause::One), 1);
    }
}
