//! Deferred directional forgetting of rule conclusions.
//!
//! Each conclusion keeps a bounded FIFO of the `(x_aug, β̄)` pairs that
//! updated it. Once the window is full, the oldest pair is removed from the
//! correlation matrix with an exact Sherman-Morrison downdate, so that `C`
//! always describes only the points still in the window:
//!
//! ```text
//! C⁻¹ = Ω⁻¹·I + Σ_{(x, β) ∈ window} β·x·xᵀ
//! ```
//!
//! The coefficient matrix is never decremented. Only the directions recently
//! excited regain gain, which steers later updates without winding up `C`.
//!
//! The weight stored with a point is the one used when it was added. Memberships
//! drift as premises move, and only the original weight cancels the original
//! increment.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fis::{AugmentedInput, Consequent};
use crate::numerics::{downdate_in_place, Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowEntry {
    pub x_aug: AugmentedInput,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DdfWindow {
    capacity: usize,
    entries: VecDeque<WindowEntry>,
}

impl DdfWindow {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "window capacity must be positive");
        Self {
            capacity,
            entries: VecDeque::with_capacity(capacity + 1),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &WindowEntry> {
        self.entries.iter()
    }

    /// Pushes a new entry and returns the evicted one if capacity was exceeded.
    pub fn push(&mut self, entry: WindowEntry) -> Option<WindowEntry> {
        self.entries.push_back(entry);
        if self.entries.len() > self.capacity {
            self.entries.pop_front()
        } else {
            None
        }
    }

    pub fn pop_oldest(&mut self) -> Option<WindowEntry> {
        self.entries.pop_front()
    }
}

/// A conclusion together with the window of points it was learned on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DdfConsequent {
    pub consequent: Consequent,
    pub window: DdfWindow,
    /// Downdates refused because their denominator was near zero.
    pub skipped_downdates: u64,
}

impl DdfConsequent {
    pub fn new(consequent: Consequent, capacity: usize) -> Self {
        Self {
            consequent,
            window: DdfWindow::new(capacity),
            skipped_downdates: 0,
        }
    }

    /// Plain WRLS step. The point is still recorded in the window (so that a
    /// later switch to windowed learning has history), but nothing is
    /// forgotten.
    pub fn wrls_update(&mut self, x_aug: &AugmentedInput, w: f64, target: &Vector) -> Result<()> {
        self.consequent.wrls_update(x_aug, w, target)?;
        self.window.push(WindowEntry {
            x_aug: x_aug.clone(),
            weight: w,
        });
        Ok(())
    }

    /// WRLS step followed by removal of the point that fell out of the window.
    pub fn ddf_update(&mut self, x_aug: &AugmentedInput, w: f64, target: &Vector) -> Result<()> {
        self.consequent.wrls_update(x_aug, w, target)?;
        let evicted = self.window.push(WindowEntry {
            x_aug: x_aug.clone(),
            weight: w,
        });
        if let Some(old) = evicted {
            self.forget(&old)?;
        }
        Ok(())
    }

    /// Removes the oldest window entry from `C`. Returns false when empty.
    pub fn evict_oldest(&mut self) -> Result<bool> {
        match self.window.pop_oldest() {
            Some(old) => {
                self.forget(&old)?;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn forget(&mut self, entry: &WindowEntry) -> Result<()> {
        match downdate_in_place(
            &mut self.consequent.corr,
            entry.x_aug.as_vector(),
            entry.weight,
        ) {
            Ok(()) => Ok(()),
            Err(Error::NearSingularDowndate { denominator }) => {
                log::debug!("skipped near-singular downdate (denominator {denominator:e})");
                self.skipped_downdates += 1;
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    /// Rebuilds `C` from `Ω·I` and the current window contents.
    pub fn rebuild_corr_from_window(&mut self) {
        let n = self.consequent.corr.nrows();
        let mut corr = Matrix::identity(n, n) * self.consequent.omega;
        for e in self.window.iter() {
            crate::numerics::rank_one_increment(&mut corr, e.x_aug.as_vector(), e.weight);
        }
        self.consequent.corr = corr;
    }

    /// Frobenius norm of `C⁻¹ − Ω⁻¹I − Σ_window β x xᵀ`.
    pub fn window_residual(&self) -> Result<f64> {
        let n = self.consequent.corr.nrows();
        let inv = self
            .consequent
            .corr
            .clone()
            .try_inverse()
            .ok_or(Error::NotPositiveDefinite)?;
        let mut expected = Matrix::identity(n, n) / self.consequent.omega;
        for e in self.window.iter() {
            let x = e.x_aug.as_vector();
            expected.ger(e.weight, x, x, 1.0);
        }
        Ok((inv - expected).norm())
    }
}

/// Replaces `dst`'s conclusion and window with deep copies of `src`'s.
pub fn window_transfer(src: &DdfConsequent, dst: &mut DdfConsequent) {
    dst.clone_from(src);
}
