//! Versioned model snapshots.
//!
//! A snapshot is a JSON document:
//!
//! ```text
//! { "format": "parafis-snapshot", "version": 1, "learner": { ... } }
//! ```
//!
//! `learner` holds every field of [`ParaFisLearner`]: principal rules
//! (center, covariance and its cached inverse, counts, coefficients,
//! correlation matrices, DDF windows), anticipated systems, parameters,
//! drift log and the sample counter. Floats are written in shortest
//! round-trip form and read back exactly, so resuming from a snapshot is
//! bit-identical to never having stopped.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::anticipation::ParaFisLearner;
use crate::error::{Error, Result};

pub const FORMAT: &str = "parafis-snapshot";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope<L> {
    format: String,
    version: u32,
    learner: L,
}

pub fn to_json(learner: &ParaFisLearner) -> Result<String> {
    Ok(serde_json::to_string(&Envelope {
        format: FORMAT.to_string(),
        version: VERSION,
        learner,
    })?)
}

pub fn from_json(text: &str) -> Result<ParaFisLearner> {
    let env: Envelope<ParaFisLearner> = serde_json::from_str(text)?;
    if env.format != FORMAT {
        return Err(Error::Snapshot(format!("unknown format {:?}", env.format)));
    }
    if env.version != VERSION {
        return Err(Error::Snapshot(format!(
            "version {} (this build reads {VERSION})",
            env.version
        )));
    }
    Ok(env.learner)
}

pub fn save(learner: &ParaFisLearner, path: &Path) -> Result<()> {
    fs::write(path, to_json(learner)?)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<ParaFisLearner> {
    from_json(&fs::read_to_string(path)?)
}
