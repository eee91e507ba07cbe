//! CSV ingestion with cause recoding.
//!
//! Every raw label in the cause column must be assigned to exactly one of
//! cause 1, cause 2, or the drop set (censored or event-free rows). Dropped
//! rows are counted but their time column is not parsed.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sample::{Cause, Observation, Sample};

/// Column selector: header name, or zero-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl ColumnRef {
    /// Digits select by position, anything else by header name.
    pub fn parse(s: &str) -> Self {
        match s.trim().parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.trim().to_string()),
        }
    }

    fn describe(&self) -> String {
        match self {
            ColumnRef::Name(n) => n.clone(),
            ColumnRef::Index(i) => format!("#{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub time_column: ColumnRef,
    pub cause_column: ColumnRef,
    pub cause1_labels: BTreeSet<String>,
    pub cause2_labels: BTreeSet<String>,
    pub drop_labels: BTreeSet<String>,
    pub has_header: bool,
}

impl IngestSpec {
    fn check_disjoint(&self) -> Result<()> {
        let sets = [&self.cause1_labels, &self.cause2_labels, &self.drop_labels];
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if let Some(l) = a.intersection(b).next() {
                    return Err(Error::OverlappingLabel(l.clone()));
                }
            }
        }
        Ok(())
    }

    fn classify(&self, label: &str) -> Result<Option<Cause>> {
        if self.cause1_labels.contains(label) {
            Ok(Some(Cause::One))
        } else if self.cause2_labels.contains(label) {
            Ok(Some(Cause::Two))
        } else if self.drop_labels.contains(label) {
            Ok(None)
        } else {
            Err(Error::UnmappedLabel(label.to_string()))
        }
    }
}

/// Result of reading one file.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub sample: Sample,
    pub rows_parsed: usize,
    pub n_dropped: usize,
    /// SHA-256 of the raw file bytes, hex encoded.
    pub fingerprint: String,
}

pub fn ingest(spec: &IngestSpec) -> Result<Ingested> {
    let bytes = std::fs::read(&spec.path)
        .map_err(|e| Error::Io(format!("{}: {e}", spec.path.display())))?;
    ingest_bytes(spec, &bytes)
}

/// Parses CSV content as if it had been read from `spec.path`.
pub fn ingest_bytes(spec: &IngestSpec, bytes: &[u8]) -> Result<Ingested> {
    spec.check_disjoint()?;
    let fingerprint = hex::encode(Sha256::digest(bytes));

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(spec.has_header)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(bytes);

    let headers = if spec.has_header {
        Some(
            reader
                .headers()
                .map_err(|e| Error::Parse {
                    row: 1,
                    column: String::new(),
                    reason: e.to_string(),
                })?
                .clone(),
        )
    } else {
        None
    };
    let resolve = |col: &ColumnRef| -> Result<usize> {
        match (col, &headers) {
            (ColumnRef::Index(i), _) => Ok(*i),
            (ColumnRef::Name(name), Some(h)) => {
                h.iter()
                    .position(|x| x == name)
                    .ok_or_else(|| Error::Parse {
                        row: 1,
                        column: name.clone(),
                        reason: "no such column in header".into(),
                    })
            }
            (ColumnRef::Name(name), None) => Err(Error::Parse {
                row: 1,
                column: name.clone(),
                reason: "columns can only be named when the file has a header".into(),
            }),
        }
    };
    let time_idx = resolve(&spec.time_column)?;
    let cause_idx = resolve(&spec.cause_column)?;

    let first_data_line = if spec.has_header { 2 } else { 1 };
    let mut observations = Vec::new();
    let mut rows_parsed = 0;
    let mut n_dropped = 0;
    for (k, record) in reader.records().enumerate() {
        let row = first_data_line + k;
        let record = record.map_err(|e| Error::Parse {
            row,
            column: String::new(),
            reason: e.to_string(),
        })?;
        rows_parsed += 1;
        let field = |idx: usize, col: &ColumnRef| {
            record.get(idx).ok_or_else(|| Error::Parse {
                row,
                column: col.describe(),
                reason: format!("row has only {} fields", record.len()),
            })
        };
        let label = field(cause_idx, &spec.cause_column)?;
        let Some(cause) = spec.classify(label)? else {
            n_dropped += 1;
            continue;
        };
        let raw_time = field(time_idx, &spec.time_column)?;
        let time: f64 = raw_time.parse().map_err(|_| Error::Parse {
            row,
            column: spec.time_column.describe(),
            reason: format!("`{raw_time}` is not a number"),
        })?;
        if !time.is_finite() {
            return Err(Error::Parse {
                row,
                column: spec.time_column.describe(),
                reason: format!("`{raw_time}` is not finite"),
            });
        }
        if time < 0.0 {
            return Err(Error::NegativeTime { row, value: time });
        }
        observations.push(Observation { time, cause });
    }

    Ok(Ingested {
        sample: Sample::new(observations)?,
        rows_parsed,
        n_dropped,
        fingerprint,
    })
}
