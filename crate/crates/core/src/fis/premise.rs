use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::numerics::{mahalanobis_sq, regularized_inverse, Matrix, Vector};
use crate::serde_ext;

/// Rule antecedent: an elliptical cluster with Cauchy membership.
///
/// `tmax` caps the effective sample count used by the fading factor
/// `α = 1 / min(k, tmax)`; `None` means unbounded memory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Premise {
    #[serde(with = "serde_ext::vector")]
    pub center: Vector,
    #[serde(with = "serde_ext::matrix")]
    pub cov: Matrix,
    /// Inverse of `cov` plus a small ridge, refreshed on every update.
    #[serde(with = "serde_ext::matrix")]
    pub cov_inv: Matrix,
    pub count: u64,
    pub tmax: Option<u64>,
}

impl Premise {
    pub fn new(center: Vector, cov: Matrix, count: u64, tmax: Option<u64>) -> Result<Self> {
        check_dim(center.len(), cov.nrows())?;
        check_dim(center.len(), cov.ncols())?;
        let cov_inv = regularized_inverse(&cov)?;
        Ok(Self {
            center,
            cov,
            cov_inv,
            count,
            tmax,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Cauchy membership `1 / (1 + (x−μ)ᵀ A⁻¹ (x−μ))`.
    pub fn membership(&self, x: &Vector) -> Result<f64> {
        Ok(1.0 / (1.0 + mahalanobis_sq(x, &self.center, &self.cov_inv)?))
    }

    /// Fading factor for the next update, i.e. with the count already bumped.
    pub fn next_fading_factor(&self) -> f64 {
        let k = self.count + 1;
        let t = match self.tmax {
            Some(tmax) => k.min(tmax),
            None => k,
        };
        1.0 / t as f64
    }

    /// Moves the center and covariance toward `x`:
    /// `μ ← (1−α)μ + αx`, then `A ← (1−α)A + α(x−μ)(x−μ)ᵀ` with the new `μ`.
    pub fn update(&mut self, x: &Vector) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        let alpha = self.next_fading_factor();
        self.count += 1;
        self.center *= 1.0 - alpha;
        self.center.axpy(alpha, x, 1.0);
        let diff = x - &self.center;
        self.cov *= 1.0 - alpha;
        self.cov.ger(alpha, &diff, &diff, 1.0);
        self.cov_inv = regularized_inverse(&self.cov)?;
        Ok(())
    }

    /// Copy with a different memory cap; the count is clamped to the new cap.
    pub fn with_tmax(&self, tmax: Option<u64>) -> Self {
        let mut p = self.clone();
        p.tmax = tmax;
        if let Some(cap) = tmax {
            p.count = p.count.min(cap);
        }
        p
    }
}
