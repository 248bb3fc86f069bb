use crate::error::{Error, Result};
use crate::streams::LabeledSample;

/// Consecutive (train, test) chunk pairs covering a stream prefix.
#[derive(Clone, Debug)]
pub struct Chunking<'a> {
    pub pairs: Vec<(&'a [LabeledSample], &'a [LabeledSample])>,
    /// Trailing samples too few for a full pair; they are not used.
    pub leftover: usize,
}

/// Splits into `trs` training samples followed by `tes` test samples,
/// repeated until the stream runs out.
pub fn chunk(samples: &[LabeledSample], trs: usize, tes: usize) -> Result<Chunking<'_>> {
    if trs == 0 || tes == 0 {
        return Err(Error::InvalidParameter(format!(
            "chunk sizes must be positive (trs={trs}, tes={tes})"
        )));
    }
    let period = trs + tes;
    if samples.len() < period {
        return Err(Error::Stream(format!(
            "stream has {} samples, fewer than one chunk pair ({period})",
            samples.len()
        )));
    }
    let pairs = samples
        .chunks_exact(period)
        .map(|c| c.split_at(trs))
        .collect();
    Ok(Chunking {
        pairs,
        leftover: samples.len() % period,
    })
}

/// Per-feature z-scoring with statistics fixed at fit time.
#[derive(Clone, Debug, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Population mean and standard deviation; a constant feature gets
    /// std 1 so it passes through centred.
    pub fn fit(samples: &[LabeledSample]) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::Stream("cannot standardize on an empty slice".into()))?;
        let d = first.x.len();
        let n = samples.len() as f64;
        let mut mean = vec![0.0; d];
        for s in samples {
            for (m, v) in mean.iter_mut().zip(&s.x) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for s in samples {
            for ((acc, v), m) in var.iter_mut().zip(&s.x).zip(&mean) {
                *acc += (v - m).powi(2);
            }
        }
        let std = var
            .into_iter()
            .map(|v| {
                let s = (v / n).sqrt();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Self { mean, std })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mean: vec![0.0; dim],
            std: vec![1.0; dim],
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}
