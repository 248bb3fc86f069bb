use std::fs;
use std::path::Path;

use parafis_core::eval::{mcnemar, McNemarOutcome};
use rayon::prelude::*;

use crate::cli::CompareArgs;
use crate::commands::run::{evaluate, load_config, write_outputs};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    /// Set when the row comes from `--sweep-ks`.
    pub ks: Option<f64>,
    pub outcome: McNemarOutcome,
    pub mean_a: Option<f64>,
    pub mean_b: Option<f64>,
}

fn read_labels(path: &Path) -> CliResult<Vec<usize>> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse::<usize>().map_err(|_| {
                CliError::Data(format!(
                    "{}:{}: expected a class index, found {:?}",
                    path.display(),
                    i + 1,
                    l.trim()
                ))
            })
        })
        .collect()
}

fn compare_files(a: &Path, b: &Path, truth: &Path) -> CliResult<CompareRow> {
    let (pa, pb, y) = (read_labels(a)?, read_labels(b)?, read_labels(truth)?);
    let outcome = mcnemar(&pa, &pb, &y).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(CompareRow {
        ks: None,
        outcome,
        mean_a: None,
        mean_b: None,
    })
}

fn compare_configs(
    a: &ExperimentConfig,
    b: &ExperimentConfig,
    ks: Option<f64>,
) -> CliResult<CompareRow> {
    let (ra, rb) = rayon::join(|| evaluate(a), || evaluate(b));
    let (ra, rb) = (ra?, rb?);
    let suffix = ks.map(|k| format!("-ks{k}")).unwrap_or_default();
    for (cfg, r, side) in [(a, &ra, "a"), (b, &rb, "b")] {
        let out = cfg
            .output_dir
            .join(format!("compare-{}-{side}{suffix}.json", cfg.label()));
        write_outputs(cfg, r, &out)?;
    }
    let outcome = mcnemar(&ra.predictions, &rb.predictions, &ra.truth)?;
    Ok(CompareRow {
        ks,
        outcome,
        mean_a: Some(ra.mean),
        mean_b: Some(rb.mean),
    })
}

fn print_row(row: &CompareRow) {
    let ks = row.ks.map(|k| format!("ks={k:<5} ")).unwrap_or_default();
    let acc = match (row.mean_a, row.mean_b) {
        (Some(a), Some(b)) => format!("  acc_a {a:.4}  acc_b {b:.4}"),
        _ => String::new(),
    };
    println!(
        "{ks}K = {}  n10 {}  n01 {}{acc}",
        row.outcome, row.outcome.n10, row.outcome.n01
    );
}

pub fn compare(args: &CompareArgs) -> CliResult<Vec<CompareRow>> {
    let rows = if let (Some(a), Some(b), Some(t)) = (&args.preds_a, &args.preds_b, &args.truth) {
        vec![compare_files(a, b, t)?]
    } else {
        let (Some(fa), Some(fb)) = (&args.config_a, &args.config_b) else {
            return Err(CliError::Config(
                "compare needs --config-a/--config-b or --preds-a/--preds-b/--truth".into(),
            ));
        };
        let a = load_config(Some(fa), &args.overrides)?;
        let b = load_config(Some(fb), &args.overrides)?;
        if a.stream_key() != b.stream_key() {
            return Err(CliError::Config(format!(
                "configs evaluate different streams: {:?} vs {:?}",
                a.stream_key(),
                b.stream_key()
            )));
        }
        if args.sweep_ks.is_empty() {
            vec![compare_configs(&a, &b, None)?]
        } else {
            let cells = args
                .sweep_ks
                .iter()
                .map(|&ks| {
                    let (mut a, mut b) = (a.clone(), b.clone());
                    a.ks = ks;
                    b.ks = ks;
                    a.validate()?;
                    b.validate()?;
                    Ok((a, b, ks))
                })
                .collect::<CliResult<Vec<_>>>()?;
            cells
                .par_iter()
                .map(|(a, b, ks)| compare_configs(a, b, Some(*ks)))
                .collect::<CliResult<Vec<_>>>()?
        }
    };
    rows.iter().for_each(print_row);
    Ok(rows)
}
