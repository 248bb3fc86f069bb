use serde::{Deserialize, Serialize};

use crate::anticipation::DriftEvent;
use crate::error::Result;
use crate::learner::OnlineClassifier;
use crate::streams::{chunk, LabeledSample, Standardizer, Stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoldoutResult {
    pub per_chunk_accuracy: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over chunks.
    pub std: f64,
    pub drift_events: usize,
    pub drift_log: Vec<DriftEvent>,
    pub rule_count: usize,
    /// Predictions on every test sample, in stream order.
    pub predictions: Vec<usize>,
    pub truth: Vec<usize>,
    pub samples_consumed: usize,
}

/// Mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HoldoutOptions {
    /// Z-score features with statistics of the first training chunk.
    pub standardize: bool,
    /// Hash the learner around every test chunk and fail if it changed.
    pub check_frozen: bool,
}

/// Copy of the stream with features as the learner will see them.
pub fn prepare(stream: &Stream, trs: usize, standardize: bool) -> Result<Stream> {
    if !standardize {
        return Ok(stream.clone());
    }
    let fit_on = &stream.samples[..trs.min(stream.samples.len())];
    let st = Standardizer::fit(fit_on)?;
    let samples = stream
        .samples
        .iter()
        .map(|s| LabeledSample {
            x: st.apply(&s.x),
            y: s.y,
            t: s.t,
        })
        .collect();
    Ok(Stream {
        meta: stream.meta.clone(),
        samples,
    })
}

/// Periodic hold-out: learn on each training chunk, then score the following
/// test chunk without learning from it. The learner carries over between
/// pairs. `factory` receives the prepared stream.
pub fn periodic_holdout<L, F>(
    factory: F,
    stream: &Stream,
    trs: usize,
    tes: usize,
    options: HoldoutOptions,
) -> Result<HoldoutResult>
where
    L: OnlineClassifier,
    F: FnOnce(&Stream) -> Result<L>,
{
    chunk(&stream.samples, trs, tes)?;
    let prepared = prepare(stream, trs, options.standardize)?;
    let chunking = chunk(&prepared.samples, trs, tes)?;
    let mut learner = factory(&prepared)?;

    let mut per_chunk_accuracy = Vec::with_capacity(chunking.pairs.len());
    let mut predictions = Vec::new();
    let mut truth = Vec::new();
    for (i, (train, test)) in chunking.pairs.iter().enumerate() {
        for s in train.iter() {
            learner.learn(&s.x, s.y)?;
        }
        let before = options.check_frozen.then(|| learner.fingerprint());
        let mut correct = 0usize;
        for s in test.iter() {
            let p = learner.predict(&s.x)?;
            correct += usize::from(p == s.y);
            predictions.push(p);
            truth.push(s.y);
        }
        if let Some(h) = before {
            assert_eq!(
                h,
                learner.fingerprint(),
                "learner changed while scoring chunk {i}"
            );
        }
        per_chunk_accuracy.push(correct as f64 / test.len() as f64);
        log::debug!(
            "chunk {i}: accuracy {:.4}, rules {}",
            per_chunk_accuracy[i],
            learner.rule_count()
        );
    }

    let (mean, std) = mean_std(&per_chunk_accuracy);
    Ok(HoldoutResult {
        samples_consumed: chunking.pairs.len() * (trs + tes),
        per_chunk_accuracy,
        mean,
        std,
        drift_events: learner.drift_events(),
        drift_log: learner.drift_log(),
        rule_count: learner.rule_count(),
        predictions,
        truth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::{ConstantClassifier, LookupOracle};
    use crate::streams::StreamSpec;

    #[test]
    fn oracle_scores_one() {
        let stream = StreamSpec::preset("line", 3).unwrap().build().unwrap();
        let r = periodic_holdout(
            |s: &Stream| Ok(LookupOracle::from_samples(&s.samples)),
            &stream,
            200,
            50,
            HoldoutOptions {
                standardize: true,
                check_frozen: true,
            },
        )
        .unwrap();
        assert_eq!(r.mean, 1.0);
        assert_eq!(r.std, 0.0);
        assert_eq!(r.per_chunk_accuracy.len(), 10);
        assert_eq!(r.samples_consumed, 2500);
        assert_eq!(r.predictions.len(), 500);
    }

    #[test]
    fn constant_learner_is_near_half() {
        let stream = StreamSpec::preset("sin", 1).unwrap().build().unwrap();
        let r = periodic_holdout(
            |_: &Stream| Ok(ConstantClassifier { class: 0 }),
            &stream,
            200,
            50,
            HoldoutOptions::default(),
        )
        .unwrap();
        // 500 test samples: 3 sigma of a fair binomial proportion is ~0.067.
        assert!((r.mean - 0.5).abs() < 0.07, "mean {}", r.mean);
    }

    #[test]
    fn population_std() {
        let (m, s) = mean_std(&[0.0, 1.0]);
        assert_eq!(m, 0.5);
        assert_eq!(s, 0.5);
    }
}
