use parafis_core::streams::Stream;
use rayon::prelude::*;

use crate::cli::TuneArgs;
use crate::commands::run::{evaluate_on, load_config, write_outputs};
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct TuneCell {
    pub ks: f64,
    pub window: usize,
    pub mean: f64,
    pub rules: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuneOutcome {
    /// Sorted by ks, then window.
    pub cells: Vec<TuneCell>,
    pub best: TuneCell,
    /// False when no cell met the rule cap and the best accuracy was taken instead.
    pub within_rule_cap: bool,
}

/// Most accurate cell with at most `cap` rules; ties go to the smaller ks, then the
/// smaller window. Falls back to ignoring the cap if nothing meets it.
pub fn select(cells: &[TuneCell], cap: usize) -> Option<(TuneCell, bool)> {
    let best = |pool: Vec<&TuneCell>| {
        pool.into_iter()
            .fold(None::<&TuneCell>, |acc, c| match acc {
                Some(b) if b.mean >= c.mean => Some(b),
                _ => Some(c),
            })
            .cloned()
    };
    let capped: Vec<_> = cells.iter().filter(|c| c.rules <= cap).collect();
    match best(capped) {
        Some(c) => Some((c, true)),
        None => best(cells.iter().collect()).map(|c| (c, false)),
    }
}

fn validation_prefix(
    cfg: &ExperimentConfig,
    fraction: f64,
) -> CliResult<(ExperimentConfig, Stream)> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(CliError::Config(format!(
            "fraction = {fraction} outside (0, 1]"
        )));
    }
    let mut stream = cfg.stream_spec()?.build()?;
    let n = (stream.len() as f64 * fraction).floor() as usize;
    if n < cfg.trs + cfg.tes {
        return Err(CliError::Config(format!(
            "validation prefix of {n} samples is shorter than one chunk ({} + {})",
            cfg.trs, cfg.tes
        )));
    }
    stream.samples.truncate(n);
    let mut cfg = cfg.clone();
    cfg.length = n;
    Ok((cfg, stream))
}

pub fn tune(args: &TuneArgs) -> CliResult<TuneOutcome> {
    if args.ks_grid.is_empty() || args.ws_grid.is_empty() {
        return Err(CliError::Config(
            "ks and window grids must not be empty".into(),
        ));
    }
    let base = load_config(args.config.as_deref(), &args.overrides)?;
    let (base, stream) = validation_prefix(&base, args.fraction)?;
    let mut grid = Vec::new();
    for &ks in &args.ks_grid {
        for &window in &args.ws_grid {
            let mut cfg = base.clone();
            cfg.ks = ks;
            cfg.window = window;
            cfg.validate()?;
            grid.push(cfg);
        }
    }
    grid.sort_by(|a, b| a.ks.total_cmp(&b.ks).then(a.window.cmp(&b.window)));
    grid.dedup_by(|a, b| a.ks == b.ks && a.window == b.window);
    let dir = base.output_dir.join(format!("tune-{}", base.label()));
    let cells = grid
        .par_iter()
        .map(|cfg| {
            let result = evaluate_on(cfg, &stream)?;
            let out = dir.join(format!("ks{}-ws{}.json", cfg.ks, cfg.window));
            write_outputs(cfg, &result, &out)?;
            Ok(TuneCell {
                ks: cfg.ks,
                window: cfg.window,
                mean: result.mean,
                rules: result.rule_count,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let cap = 3 * stream.meta.classes;
    let (best, within_rule_cap) = select(&cells, cap).expect("grid is not empty");
    println!("{:>6} {:>6} {:>8} {:>6}", "ks", "ws", "accuracy", "rules");
    for c in &cells {
        println!("{:>6} {:>6} {:>8.4} {:>6}", c.ks, c.window, c.mean, c.rules);
    }
    if !within_rule_cap {
        log::warn!("no cell stays within {cap} rules; picking the most accurate one");
    }
    println!(
        "best: ks = {}, ws = {} (accuracy {:.4}, {} rules) on {} validation samples",
        best.ks,
        best.window,
        best.mean,
        best.rules,
        stream.len()
    );
    println!("cell results in {}", dir.display());
    Ok(TuneOutcome {
        cells,
        best,
        within_rule_cap,
    })
}
