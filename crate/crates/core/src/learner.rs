//! The classifier interface used by the evaluation harness, plus the
//! reference learners it is tested against.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use crate::anticipation::{DriftEvent, ParaFisLearner};
use crate::error::{Error, Result};
use crate::fis::{ConclusionUpdate, FuzzySystem, SystemParams};
use crate::numerics::Vector;
use crate::streams::LabeledSample;

pub trait OnlineClassifier {
    /// Test-then-train on one labelled sample; returns the prediction made
    /// before learning.
    fn learn(&mut self, x: &[f64], y: usize) -> Result<usize>;

    fn predict(&self, x: &[f64]) -> Result<usize>;

    fn drift_events(&self) -> usize {
        0
    }

    fn drift_log(&self) -> Vec<DriftEvent> {
        Vec::new()
    }

    fn rule_count(&self) -> usize {
        0
    }

    /// Hash of the full learner state, used to check that evaluation does
    /// not mutate a model.
    fn fingerprint(&self) -> u64;
}

fn hash_json<T: serde::Serialize>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    serde_json::to_string(value)
        .expect("learner state serializes")
        .hash(&mut h);
    h.finish()
}

impl OnlineClassifier for ParaFisLearner {
    fn learn(&mut self, x: &[f64], y: usize) -> Result<usize> {
        self.learn_sample(x, y)
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        ParaFisLearner::predict(self, x)
    }

    fn drift_events(&self) -> usize {
        self.drift_log.len()
    }

    fn drift_log(&self) -> Vec<DriftEvent> {
        self.drift_log.clone()
    }

    fn rule_count(&self) -> usize {
        ParaFisLearner::rule_count(self)
    }

    fn fingerprint(&self) -> u64 {
        hash_json(self)
    }
}

/// The principal system alone: same rule birth and learning, no
/// anticipation module and no forgetting.
#[derive(Clone, Debug)]
pub struct PlainFis {
    pub system: FuzzySystem,
}

impl PlainFis {
    pub fn new(dim: usize, classes: usize, params: SystemParams) -> Result<Self> {
        Ok(Self {
            system: FuzzySystem::new(dim, classes, params)?,
        })
    }
}

impl OnlineClassifier for PlainFis {
    fn learn(&mut self, x: &[f64], y: usize) -> Result<usize> {
        let step = self
            .system
            .learn(&Vector::from_column_slice(x), y, ConclusionUpdate::Plain)?;
        Ok(step.prediction)
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        self.system.predict_class(&Vector::from_column_slice(x))
    }

    fn rule_count(&self) -> usize {
        self.system.len()
    }

    fn fingerprint(&self) -> u64 {
        hash_json(&self.system)
    }
}

/// Always answers the same class.
#[derive(Clone, Debug)]
pub struct ConstantClassifier {
    pub class: usize,
}

impl OnlineClassifier for ConstantClassifier {
    fn learn(&mut self, _x: &[f64], _y: usize) -> Result<usize> {
        Ok(self.class)
    }

    fn predict(&self, _x: &[f64]) -> Result<usize> {
        Ok(self.class)
    }

    fn fingerprint(&self) -> u64 {
        self.class as u64
    }
}

/// Knows the label of every sample of a given stream, keyed on the exact
/// feature bits. Used to sanity-check the evaluation harness.
#[derive(Clone, Debug, Default)]
pub struct LookupOracle {
    table: HashMap<Vec<u64>, usize>,
}

impl LookupOracle {
    pub fn from_samples(samples: &[LabeledSample]) -> Self {
        let table = samples.iter().map(|s| (Self::key(&s.x), s.y)).collect();
        Self { table }
    }

    fn key(x: &[f64]) -> Vec<u64> {
        x.iter().map(|v| v.to_bits()).collect()
    }
}

impl OnlineClassifier for LookupOracle {
    fn learn(&mut self, x: &[f64], y: usize) -> Result<usize> {
        self.predict(x).or(Ok(y))
    }

    fn predict(&self, x: &[f64]) -> Result<usize> {
        self.table
            .get(&Self::key(x))
            .copied()
            .ok_or_else(|| Error::Stream("oracle has no label for this sample".into()))
    }

    fn fingerprint(&self) -> u64 {
        self.table.len() as u64
    }
}
