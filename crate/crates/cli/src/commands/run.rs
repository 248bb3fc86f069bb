use std::path::{Path, PathBuf};

use parafis_core::eval::{
    periodic_holdout, persist_results, read_results, write_chunk_csv, write_drift_log,
    HoldoutOptions, HoldoutResult, ResultsRecord,
};
use parafis_core::learner::{ConstantClassifier, LookupOracle, PlainFis};
use parafis_core::streams::Stream;
use parafis_core::ParaFisLearner;

use crate::cli::RunArgs;
use crate::commands::{ensure_dir, io_error};
use crate::config::{ExperimentConfig, LearnerKind, Overrides};
use crate::error::{CliError, CliResult};

/// Resolves flags over an optional config file.
pub fn load_config(file: Option<&Path>, flags: &Overrides) -> CliResult<ExperimentConfig> {
    let base = match file {
        Some(path) => Overrides::from_toml_file(path)?,
        None => Overrides::default(),
    };
    ExperimentConfig::resolve(flags.clone().over(base))
}

/// Builds the stream and runs the periodic hold-out for `cfg`.
pub fn evaluate(cfg: &ExperimentConfig) -> CliResult<HoldoutResult> {
    let stream = cfg.stream_spec()?.build()?;
    evaluate_on(cfg, &stream)
}

/// Runs the hold-out for `cfg` on an already built stream.
pub fn evaluate_on(cfg: &ExperimentConfig, stream: &Stream) -> CliResult<HoldoutResult> {
    let options = HoldoutOptions {
        standardize: cfg.standardize,
        check_frozen: false,
    };
    let (trs, tes) = (cfg.trs, cfg.tes);
    let result = match cfg.learner {
        LearnerKind::Parafis => {
            let params = cfg.learner_params();
            periodic_holdout(
                |s: &Stream| ParaFisLearner::new(s.meta.dim, s.meta.classes, params),
                stream,
                trs,
                tes,
                options,
            )
        }
        LearnerKind::Plain => {
            let params = cfg.learner_params().system_params();
            periodic_holdout(
                |s: &Stream| PlainFis::new(s.meta.dim, s.meta.classes, params),
                stream,
                trs,
                tes,
                options,
            )
        }
        LearnerKind::Oracle => periodic_holdout(
            |s: &Stream| Ok(LookupOracle::from_samples(&s.samples)),
            stream,
            trs,
            tes,
            options,
        ),
        LearnerKind::Constant => periodic_holdout(
            |_: &Stream| Ok(ConstantClassifier { class: 0 }),
            stream,
            trs,
            tes,
            options,
        ),
    };
    Ok(result?)
}

/// Writes `<stem>.json`, `<stem>.chunks.csv` and `<stem>.drift.jsonl`.
pub(crate) fn write_outputs(
    cfg: &ExperimentConfig,
    result: &HoldoutResult,
    out: &Path,
) -> CliResult<()> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    let record = ResultsRecord::new(cfg.to_json(), result);
    persist_results(&record, out).map_err(|e| io_error(out, e))?;
    let chunks = out.with_extension("chunks.csv");
    write_chunk_csv(&result.per_chunk_accuracy, &chunks).map_err(|e| io_error(&chunks, e))?;
    let drift = out.with_extension("drift.jsonl");
    write_drift_log(&result.drift_log, &drift).map_err(|e| io_error(&drift, e))?;
    Ok(())
}

pub fn run(args: &RunArgs) -> CliResult<PathBuf> {
    let cfg = match &args.rerun {
        Some(path) => {
            let record = read_results(path).map_err(|e| CliError::Config(e.to_string()))?;
            let stored: ExperimentConfig = serde_json::from_value(record.config)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::resolve(args.overrides.clone().over(stored.into()))?
        }
        None => load_config(args.config.as_deref(), &args.overrides)?,
    };
    log::info!("running {}", cfg.label());
    let result = evaluate(&cfg)?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| cfg.output_dir.join(format!("{}.json", cfg.label())));
    write_outputs(&cfg, &result, &out)?;
    println!(
        "{}: accuracy {:.4} ± {:.4} over {} chunks, {} drift events, {} rules",
        cfg.label(),
        result.mean,
        result.std,
        result.per_chunk_accuracy.len(),
        result.drift_events,
        result.rule_count
    );
    println!("results written to {}", out.display());
    Ok(out)
}
