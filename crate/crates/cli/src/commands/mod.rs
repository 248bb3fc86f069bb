mod compare;
mod generate;
mod run;
mod tune;

pub use compare::{compare, CompareRow};
pub use generate::generate;
pub use run::{evaluate, evaluate_on, load_config, run};
pub use tune::{select, tune, TuneCell, TuneOutcome};

use std::path::Path;

use crate::error::{CliError, CliResult};

pub(crate) fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

pub(crate) fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))
}
