//! Results files.
//!
//! A run is stored as pretty-printed JSON with a fixed field order, so two
//! runs of the same config differ only in `timestamp`. Next to it the
//! per-chunk accuracies can be written as a flat CSV for plotting, and the
//! drift log as JSON lines.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::anticipation::DriftEvent;
use crate::error::{Error, Result};
use crate::eval::HoldoutResult;

pub const RESULTS_FORMAT: &str = "parafis-results";
pub const RESULTS_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub chunks: usize,
    pub drift_events: usize,
    pub rule_count: usize,
    pub samples_consumed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsRecord {
    pub format: String,
    pub version: u32,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// The fully resolved experiment configuration, seed included.
    pub config: serde_json::Value,
    pub summary: Summary,
    pub per_chunk_accuracy: Vec<f64>,
    pub drift_events: Vec<DriftEvent>,
    pub predictions: Vec<usize>,
    pub truth: Vec<usize>,
}

impl ResultsRecord {
    pub fn new(config: serde_json::Value, result: &HoldoutResult) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            format: RESULTS_FORMAT.into(),
            version: RESULTS_VERSION,
            timestamp,
            config,
            summary: Summary {
                mean: result.mean,
                std: result.std,
                chunks: result.per_chunk_accuracy.len(),
                drift_events: result.drift_events,
                rule_count: result.rule_count,
                samples_consumed: result.samples_consumed,
            },
            per_chunk_accuracy: result.per_chunk_accuracy.clone(),
            drift_events: result.drift_log.clone(),
            predictions: result.predictions.clone(),
            truth: result.truth.clone(),
        }
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => Ok(fs::create_dir_all(dir)?),
        _ => Ok(()),
    }
}

pub fn persist_results(record: &ResultsRecord, path: &Path) -> Result<()> {
    ensure_parent(path)?;
    fs::write(path, serde_json::to_string_pretty(record)? + "\n")?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<ResultsRecord> {
    let record: ResultsRecord = serde_json::from_str(&fs::read_to_string(path)?)?;
    if record.format != RESULTS_FORMAT {
        return Err(Error::InvalidParameter(format!(
            "{} is not a results file (format {:?})",
            path.display(),
            record.format
        )));
    }
    Ok(record)
}

/// `chunk,accuracy` rows.
pub fn write_chunk_csv(per_chunk_accuracy: &[f64], path: &Path) -> Result<()> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["chunk", "accuracy"])?;
    for (i, a) in per_chunk_accuracy.iter().enumerate() {
        w.write_record([i.to_string(), a.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_drift_log(events: &[DriftEvent], path: &Path) -> Result<()> {
    ensure_parent(path)?;
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}
