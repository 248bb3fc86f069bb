use std::collections::HashMap;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::streams::{DriftPoint, LabeledSample, Stream, StreamMeta};

/// How labels in the last column are mapped to class indices.
#[derive(Clone, Debug, Default)]
pub struct CsvSchema {
    /// Declared label set, in class-index order. When given the mapping is
    /// frozen and any other label is an error; otherwise labels get indices
    /// in order of first appearance.
    pub labels: Option<Vec<String>>,
}

/// Reads a CSV stream in file order: header row, numeric feature columns,
/// label in the last column.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> Result<Stream> {
    let file = File::open(path)
        .map_err(|e| Error::Stream(format!("cannot open dataset {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader.headers()?.clone();
    if header.len() < 2 {
        return Err(Error::Parse {
            line: 1,
            message: "need at least one feature column and a label column".into(),
        });
    }
    let dim = header.len() - 1;

    let frozen = schema.labels.is_some();
    let mut labels: Vec<String> = schema.labels.clone().unwrap_or_default();
    let mut index: HashMap<String, usize> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.clone(), i))
        .collect();

    let mut samples = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(row + 2);
        if record.len() != header.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let mut x = Vec::with_capacity(dim);
        for (col, field) in record.iter().take(dim).enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("column {:?}: {field:?} is not numeric", &header[col]),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("column {:?}: non-finite value", &header[col]),
                });
            }
            x.push(v);
        }
        let label = &record[dim];
        let y = match index.get(label) {
            Some(&y) => y,
            None if frozen => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown label {label:?}"),
                })
            }
            None => {
                let y = labels.len();
                labels.push(label.to_string());
                index.insert(label.to_string(), y);
                y
            }
        };
        samples.push(LabeledSample {
            x,
            y,
            t: samples.len() as u64,
        });
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    Ok(Stream {
        meta: StreamMeta {
            name,
            dim,
            classes: labels.len(),
            labels,
            drifts: Vec::new(),
            noise: 0.0,
            spec: None,
        },
        samples,
    })
}

/// Writes `f0..f{d-1},label` rows; labels are written by name.
pub fn write_csv(stream: &Stream, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = (0..stream.meta.dim).map(|i| format!("f{i}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for s in &stream.samples {
        let mut row: Vec<String> = s.x.iter().map(|v| v.to_string()).collect();
        row.push(
            stream
                .meta
                .labels
                .get(s.y)
                .cloned()
                .unwrap_or_else(|| s.y.to_string()),
        );
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Sidecar path for a stream CSV: `<file>.meta.json`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

pub fn write_metadata(meta: &StreamMeta, path: &Path) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(meta)? + "\n")?;
    Ok(())
}

pub fn read_metadata(path: &Path) -> Result<StreamMeta> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Swaps classes `a` and `b` from each position on; a second position swaps
/// them back, and so on.
pub fn inject_class_swap(
    stream: &mut Stream,
    positions: &[usize],
    a: usize,
    b: usize,
) -> Result<()> {
    let classes = stream.meta.classes;
    if a >= classes || b >= classes {
        return Err(Error::InvalidParameter(format!(
            "class swap {a}<->{b} outside 0..{classes}"
        )));
    }
    for (t, s) in stream.samples.iter_mut().enumerate() {
        let active = positions.iter().filter(|&&p| p <= t).count() % 2 == 1;
        if active {
            if s.y == a {
                s.y = b;
            } else if s.y == b {
                s.y = a;
            }
        }
    }
    for &p in positions {
        stream.meta.drifts.push(DriftPoint {
            position: p,
            kind: "abrupt".into(),
            detail: format!("classes {a} and {b} swapped"),
        });
    }
    stream.meta.drifts.sort_by_key(|d| d.position);
    Ok(())
}
