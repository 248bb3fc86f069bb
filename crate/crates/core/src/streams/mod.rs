//! Labelled data streams: synthetic drift generators, CSV ingestion and
//! chunking for the hold-out protocol.

mod chunk;
mod csv_io;
mod generators;

pub use chunk::{chunk, Chunking, Standardizer};
pub use csv_io::{
    inject_class_swap, load_csv, metadata_path, read_metadata, write_csv, write_metadata, CsvSchema,
};
pub use generators::{boundary_label, hyperplane_label, sea_label, Boundary};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub x: Vec<f64>,
    pub y: usize,
    pub t: u64,
}

/// Where the samples come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    /// Three uniform features on [0, 10]; class 1 iff `f1 + f2 ≤ θ`, with `θ`
    /// switching abruptly between equal-length blocks.
    Sea { thresholds: Vec<f64>, noise: f64 },
    /// Uniform features on [0, 1]^dim labelled by a slowly rotating
    /// hyperplane `w·x ≥ Σw / 2`.
    Hyperplane {
        dim: usize,
        magnitude: f64,
        reversal_prob: f64,
        noise: f64,
    },
    /// Two features on [−π, π]², class 1 above a boundary curve; labels are
    /// inverted at each swap position.
    Boundary {
        boundary: Boundary,
        swaps: Vec<usize>,
        noise: f64,
    },
    /// Ten uniform features labelled by a fixed hyperplane whose coefficients
    /// are reversed at `swap_at`.
    Plane10d { swap_at: usize, noise: f64 },
    /// Two Gaussian classes in 2-D; the class-1 mode jumps by `jump` standard
    /// deviations along the second axis at `jump_at`.
    GaussianJump {
        jump_at: usize,
        jump: f64,
        separation: f64,
        spread: f64,
    },
    /// User-supplied CSV (header, numeric features, label last).
    Csv {
        path: PathBuf,
        #[serde(default)]
        labels: Option<Vec<String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub source: Source,
    /// Number of samples to generate (CSV: 0 reads the whole file).
    pub length: usize,
    /// Training samples per chunk.
    pub trs: usize,
    /// Test samples per chunk.
    pub tes: usize,
    pub seed: u64,
}

impl StreamSpec {
    /// Default specs for the benchmark shapes: `sea`, `hyperplane`, `line`,
    /// `sin`, `sinh`, `10dplane` and the `gauss_jump` detection stream.
    pub fn preset(name: &str, seed: u64) -> Result<Self> {
        let boundary = |boundary| Source::Boundary {
            boundary,
            swaps: vec![1250],
            noise: 0.0,
        };
        let (source, length, trs, tes) = match name {
            "sea" => (
                Source::Sea {
                    thresholds: vec![8.0, 9.0, 7.0, 9.5],
                    noise: 0.02,
                },
                100_000,
                250,
                250,
            ),
            "hyperplane" => (
                Source::Hyperplane {
                    dim: 4,
                    magnitude: 0.001,
                    reversal_prob: 0.1,
                    noise: 0.05,
                },
                120_000,
                1000,
                250,
            ),
            "line" => (
                boundary(Boundary::Line {
                    slope: 1.0,
                    intercept: 0.0,
                }),
                2500,
                200,
                50,
            ),
            "sin" => (boundary(Boundary::Sin), 2500, 200, 50),
            "sinh" => (boundary(Boundary::Sinh), 2500, 200, 50),
            "10dplane" => (
                Source::Plane10d {
                    swap_at: 600,
                    noise: 0.0,
                },
                1200,
                100,
                20,
            ),
            "gauss_jump" => (
                Source::GaussianJump {
                    jump_at: 1000,
                    jump: 10.0,
                    separation: 5.0,
                    spread: 1.0,
                },
                2000,
                200,
                50,
            ),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown stream kind {other:?} (expected one of {})",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(Self {
            source,
            length,
            trs,
            tes,
            seed,
        })
    }

    pub fn name(&self) -> String {
        match &self.source {
            Source::Sea { .. } => "sea".into(),
            Source::Hyperplane { .. } => "hyperplane".into(),
            Source::Boundary { boundary, .. } => boundary.name().into(),
            Source::Plane10d { .. } => "10dplane".into(),
            Source::GaussianJump { .. } => "gauss_jump".into(),
            Source::Csv { path, .. } => path.display().to_string(),
        }
    }

    /// Generates (or loads) the stream. Pure in `(spec, seed)`.
    pub fn build(&self) -> Result<Stream> {
        match &self.source {
            Source::Csv { path, labels } => {
                let schema = CsvSchema {
                    labels: labels.clone(),
                };
                let mut stream = load_csv(path, &schema)?;
                if self.length > 0 && self.length < stream.samples.len() {
                    stream.samples.truncate(self.length);
                }
                stream.meta.spec = Some(self.clone());
                Ok(stream)
            }
            _ => generators::generate(self),
        }
    }
}

pub const PRESETS: [&str; 7] = [
    "sea",
    "hyperplane",
    "line",
    "sin",
    "sinh",
    "10dplane",
    "gauss_jump",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftPoint {
    pub position: usize,
    pub kind: String,
    pub detail: String,
}

/// Everything needed to interpret and reproduce a stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamMeta {
    pub name: String,
    pub dim: usize,
    pub classes: usize,
    /// Label names in class-index order.
    pub labels: Vec<String>,
    pub drifts: Vec<DriftPoint>,
    pub noise: f64,
    pub spec: Option<StreamSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stream {
    pub meta: StreamMeta,
    pub samples: Vec<LabeledSample>,
}

impl Stream {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}
