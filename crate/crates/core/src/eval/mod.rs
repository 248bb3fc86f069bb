//! Periodic hold-out evaluation, McNemar comparisons and results files.

mod holdout;
mod mcnemar;
mod persist;

pub use holdout::{mean_std, periodic_holdout, prepare, HoldoutOptions, HoldoutResult};
pub use mcnemar::{mcnemar, McNemarOutcome, Verdict, MIN_DISCORDANT, NOT_SIGNIFICANT, SIGNIFICANT};
pub use persist::{
    persist_results, read_results, write_chunk_csv, write_drift_log, ResultsRecord, Summary,
    RESULTS_FORMAT, RESULTS_VERSION,
};
