//! Experiment configuration.
//!
//! A config file is flat TOML, one `key = value` per parameter; see
//! [`Overrides`] for the keys. Values are resolved as
//! command-line flag > config file > `PARAFIS_OUTPUT_DIR` (output directory
//! only) > built-in default.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use parafis_core::anticipation::SubConclusionInit;
use parafis_core::fis::WrlsWeight;
use parafis_core::serde_ext;
use parafis_core::streams::{Source, StreamSpec};
use parafis_core::{ForgettingMode, LearnerParams, Strategy};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const OUTPUT_DIR_ENV: &str = "PARAFIS_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "results";

pub const KS_RANGE: (f64, f64) = (0.4, 1.0);
pub const WINDOW_RANGE: (usize, usize) = (10, 200);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    #[default]
    Parafis,
    /// Principal system only, no anticipation or forgetting.
    Plain,
    /// Looks up the true label; a harness sanity check.
    Oracle,
    /// Always predicts class 0.
    Constant,
}

/// Parses a snake_case enum name through its serde representation.
fn parse_name<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown value {s:?}"))
}

/// Every key of the config file, all optional. The same struct backs the
/// command-line flags.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Stream preset (sea, hyperplane, line, sin, sinh, 10dplane, gauss_jump) or `csv`.
    #[arg(long)]
    pub stream: Option<String>,
    /// CSV file for `stream = "csv"`.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Number of samples (CSV: 0 reads the whole file).
    #[arg(long)]
    pub length: Option<usize>,
    /// Training samples per chunk.
    #[arg(long)]
    pub trs: Option<usize>,
    /// Test samples per chunk.
    #[arg(long)]
    pub tes: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Z-score features with first-training-chunk statistics.
    #[arg(long)]
    pub standardize: Option<bool>,
    /// parafis, plain, oracle or constant.
    #[arg(long, value_parser = parse_name::<LearnerKind>)]
    pub learner: Option<LearnerKind>,
    #[arg(long)]
    pub tmax_slow: Option<u64>,
    #[arg(long)]
    pub tmax_fast: Option<u64>,
    /// Separation coefficient; `inf` disables detection.
    #[arg(long)]
    pub ks: Option<f64>,
    #[arg(long)]
    pub nmin: Option<u64>,
    /// DDF window size.
    #[arg(long, visible_alias = "ws")]
    #[serde(alias = "ws")]
    pub window: Option<usize>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub sigma_init: Option<f64>,
    /// naive or global.
    #[arg(long, value_parser = parse_name::<Strategy>)]
    pub strategy: Option<Strategy>,
    /// none, forget_ps or forget_am.
    #[arg(long, value_parser = parse_name::<ForgettingMode>)]
    pub forgetting: Option<ForgettingMode>,
    /// normalized or raw.
    #[arg(long, value_parser = parse_name::<WrlsWeight>)]
    pub wrls_weight: Option<WrlsWeight>,
    /// parent or zero.
    #[arg(long, value_parser = parse_name::<SubConclusionInit>)]
    pub sub_init: Option<SubConclusionInit>,
    /// Directory for results files.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

impl Overrides {
    pub fn from_toml_file(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `self` win over `base`.
    pub fn over(self, base: Overrides) -> Overrides {
        macro_rules! pick {
            ($($f:ident),*) => {
                Overrides { $($f: self.$f.or(base.$f)),* }
            };
        }
        pick!(
            stream,
            data,
            length,
            trs,
            tes,
            seed,
            standardize,
            learner,
            tmax_slow,
            tmax_fast,
            ks,
            nmin,
            window,
            omega,
            sigma_init,
            strategy,
            forgetting,
            wrls_weight,
            sub_init,
            output_dir
        )
    }
}

/// Fully resolved experiment; embedded in every results file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub stream: String,
    pub data: Option<PathBuf>,
    pub length: usize,
    pub trs: usize,
    pub tes: usize,
    pub seed: u64,
    pub standardize: bool,
    pub learner: LearnerKind,
    pub tmax_slow: u64,
    pub tmax_fast: u64,
    #[serde(with = "serde_ext::extended_f64")]
    pub ks: f64,
    pub nmin: u64,
    pub window: usize,
    pub omega: f64,
    pub sigma_init: f64,
    pub strategy: Strategy,
    pub forgetting: ForgettingMode,
    pub wrls_weight: WrlsWeight,
    pub sub_init: SubConclusionInit,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Applies defaults to whatever `o` leaves unset, then validates.
    pub fn resolve(o: Overrides) -> CliResult<Self> {
        let stream = o.stream.unwrap_or_else(|| "sea".to_string());
        let base = if stream == "csv" {
            None
        } else {
            Some(StreamSpec::preset(&stream, 0).map_err(|e| CliError::Config(e.to_string()))?)
        };
        let (def_len, def_trs, def_tes) = base
            .as_ref()
            .map_or((0, 200, 50), |s| (s.length, s.trs, s.tes));
        let p = LearnerParams::default();
        let output_dir = o
            .output_dir
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
        let cfg = Self {
            stream,
            data: o.data,
            length: o.length.unwrap_or(def_len),
            trs: o.trs.unwrap_or(def_trs),
            tes: o.tes.unwrap_or(def_tes),
            seed: o.seed.unwrap_or(0),
            standardize: o.standardize.unwrap_or(true),
            learner: o.learner.unwrap_or_default(),
            tmax_slow: o.tmax_slow.unwrap_or(p.tmax_slow),
            tmax_fast: o.tmax_fast.unwrap_or(p.tmax_fast),
            ks: o.ks.unwrap_or(p.ks),
            nmin: o.nmin.unwrap_or(p.nmin),
            window: o.window.unwrap_or(p.window),
            omega: o.omega.unwrap_or(p.omega),
            sigma_init: o.sigma_init.unwrap_or(p.sigma_init),
            strategy: o.strategy.unwrap_or(p.strategy),
            forgetting: o.forgetting.unwrap_or(p.forgetting),
            wrls_weight: o.wrls_weight.unwrap_or(p.wrls_weight),
            sub_init: o.sub_init.unwrap_or(p.sub_init),
            output_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.stream == "csv" && self.data.is_none() {
            return bad("stream = \"csv\" needs a data file".into());
        }
        if self.stream != "csv" && self.data.is_some() {
            return bad("data is only used with stream = \"csv\"".into());
        }
        if self.trs == 0 || self.tes == 0 {
            return bad(format!(
                "trs and tes must be positive (got {}, {})",
                self.trs, self.tes
            ));
        }
        let (lo, hi) = KS_RANGE;
        if !(self.ks == f64::INFINITY || (lo..=hi).contains(&self.ks)) {
            return bad(format!("ks = {} outside [{lo}, {hi}] (or inf)", self.ks));
        }
        let (lo, hi) = WINDOW_RANGE;
        if !(lo..=hi).contains(&self.window) {
            return bad(format!("window = {} outside [{lo}, {hi}]", self.window));
        }
        self.learner_params()
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn learner_params(&self) -> LearnerParams {
        LearnerParams {
            tmax_slow: self.tmax_slow,
            tmax_fast: self.tmax_fast,
            ks: self.ks,
            nmin: self.nmin,
            window: self.window,
            omega: self.omega,
            sigma_init: self.sigma_init,
            strategy: self.strategy,
            forgetting: self.forgetting,
            wrls_weight: self.wrls_weight,
            sub_init: self.sub_init,
            allow_new_classes: false,
        }
    }

    pub fn stream_spec(&self) -> CliResult<StreamSpec> {
        let mut spec = match &self.data {
            Some(path) => StreamSpec {
                source: Source::Csv {
                    path: path.clone(),
                    labels: None,
                },
                length: 0,
                trs: 0,
                tes: 0,
                seed: 0,
            },
            None => StreamSpec::preset(&self.stream, self.seed)?,
        };
        spec.length = self.length;
        spec.trs = self.trs;
        spec.tes = self.tes;
        spec.seed = self.seed;
        Ok(spec)
    }

    /// The part of the config that determines the evaluated samples.
    pub fn stream_key(&self) -> (String, Option<PathBuf>, usize, usize, usize, u64, bool) {
        (
            self.stream.clone(),
            self.data.clone(),
            self.length,
            self.trs,
            self.tes,
            self.seed,
            self.standardize,
        )
    }

    /// Short name used in output file names.
    pub fn label(&self) -> String {
        let learner = match self.learner {
            LearnerKind::Parafis => {
                let s = serde_json::to_value(self.strategy).unwrap_or_default();
                let f = serde_json::to_value(self.forgetting).unwrap_or_default();
                format!(
                    "{}-{}",
                    f.as_str().unwrap_or("mode"),
                    s.as_str().unwrap_or("strategy")
                )
            }
            other => serde_json::to_value(other)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default(),
        };
        let stream = match &self.data {
            Some(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "csv".into()),
            None => self.stream.clone(),
        };
        format!("{stream}-{learner}-seed{}", self.seed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

impl From<ExperimentConfig> for Overrides {
    fn from(c: ExperimentConfig) -> Self {
        Overrides {
            stream: Some(c.stream),
            data: c.data,
            length: Some(c.length),
            trs: Some(c.trs),
            tes: Some(c.tes),
            seed: Some(c.seed),
            standardize: Some(c.standardize),
            learner: Some(c.learner),
            tmax_slow: Some(c.tmax_slow),
            tmax_fast: Some(c.tmax_fast),
            ks: Some(c.ks),
            nmin: Some(c.nmin),
            window: Some(c.window),
            omega: Some(c.omega),
            sigma_init: Some(c.sigma_init),
            strategy: Some(c.strategy),
            forgetting: Some(c.forgetting),
            wrls_weight: Some(c.wrls_weight),
            sub_init: Some(c.sub_init),
            output_dir: Some(c.output_dir),
        }
    }
}
