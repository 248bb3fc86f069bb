use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::numerics::{rank_one_increment, Matrix, Vector};
use crate::serde_ext;

/// Default initial scale of the correlation matrix, `C(0) = Ω·I`.
pub const DEFAULT_OMEGA: f64 = 100.0;

/// Input vector with a leading constant 1, so that row 0 of the coefficient
/// matrix carries the bias terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AugmentedInput(#[serde(with = "serde_ext::vector")] Vector);

impl AugmentedInput {
    pub fn new(x: &Vector) -> Self {
        let mut v = Vector::zeros(x.len() + 1);
        v[0] = 1.0;
        v.rows_mut(1, x.len()).copy_from(x);
        Self(v)
    }

    pub fn from_slice(x: &[f64]) -> Self {
        Self::new(&Vector::from_column_slice(x))
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    /// Length including the leading 1.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// One-hot encoding of `class` over `classes` outputs.
pub fn one_hot(class: usize, classes: usize) -> Vector {
    let mut y = Vector::zeros(classes);
    y[class] = 1.0;
    y
}

/// First-order conclusion of a rule for all classes jointly, learned by
/// weighted recursive least squares.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Consequent {
    /// `(d+1) × c`; column `j` is the affine model for class `j`.
    #[serde(with = "serde_ext::matrix")]
    pub coeffs: Matrix,
    /// Inverse-information ("correlation") matrix, `(d+1) × (d+1)`.
    #[serde(with = "serde_ext::matrix")]
    pub corr: Matrix,
    pub omega: f64,
}

impl Consequent {
    pub fn new(dim: usize, classes: usize, omega: f64) -> Self {
        Self {
            coeffs: Matrix::zeros(dim + 1, classes),
            corr: Matrix::identity(dim + 1, dim + 1) * omega,
            omega,
        }
    }

    pub fn classes(&self) -> usize {
        self.coeffs.ncols()
    }

    /// Per-class outputs `x_augᵀ Π`.
    pub fn outputs(&self, x_aug: &AugmentedInput) -> Vector {
        self.coeffs.tr_mul(x_aug.as_vector())
    }

    /// One WRLS step with weight `w` toward `target`:
    /// `C ← C − w C x xᵀ C / (1 + w xᵀ C x)`, then
    /// `Π ← Π + w C x (yᵀ − xᵀ Π)` with the updated `C`.
    pub fn wrls_update(&mut self, x_aug: &AugmentedInput, w: f64, target: &Vector) -> Result<()> {
        let x = x_aug.as_vector();
        check_dim(self.corr.nrows(), x.len())?;
        check_dim(self.classes(), target.len())?;
        if w == 0.0 {
            return Ok(());
        }
        let gain = rank_one_increment(&mut self.corr, x, w);
        let err = target - self.coeffs.tr_mul(x);
        self.coeffs.ger(w, &gain, &err, 1.0);
        Ok(())
    }

    /// Appends a zero column for a newly observed class.
    pub fn add_class(&mut self) {
        let cols = self.coeffs.ncols();
        let coeffs = std::mem::replace(&mut self.coeffs, Matrix::zeros(0, 0));
        self.coeffs = coeffs.insert_column(cols, 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn augmented_input_leads_with_one() {
        let a = AugmentedInput::from_slice(&[3.0, -2.0]);
        assert_eq!(a.as_vector().as_slice(), &[1.0, 3.0, -2.0]);
    }

    #[test]
    fn single_update_matches_closed_form() {
        // d = 1, c = 1, Ω = 100, x_aug = (1, 0), weight 1, target 1.
        // Ridge oracle: (Ω⁻¹I + xxᵀ)⁻¹ x y = (100/101, 0).
        let mut q = Consequent::new(1, 1, 100.0);
        let x = AugmentedInput::new(&Vector::from_column_slice(&[0.0]));
        q.wrls_update(&x, 1.0, &one_hot(0, 1)).unwrap();
        assert!((q.coeffs[(0, 0)] - 100.0 / 101.0).abs() < 1e-12);
        assert_eq!(q.coeffs[(1, 0)], 0.0);
        assert!((q.corr[(0, 0)] - 100.0 / 101.0).abs() < 1e-12);
        assert!((q.corr[(1, 1)] - 100.0).abs() < 1e-12);
        assert_eq!(q.corr[(0, 1)], 0.0);
    }

    #[test]
    fn zero_weight_leaves_state() {
        let mut q = Consequent::new(2, 3, 100.0);
        let before = q.clone();
        q.wrls_update(
            &AugmentedInput::from_slice(&[1.0, 2.0]),
            0.0,
            &one_hot(2, 3),
        )
        .unwrap();
        assert_eq!(q, before);
    }

    #[test]
    fn add_class_appends_zero_column() {
        let mut q = Consequent::new(1, 2, 100.0);
        q.coeffs[(0, 1)] = 4.0;
        q.add_class();
        assert_eq!(q.classes(), 3);
        assert_eq!(q.coeffs[(0, 1)], 4.0);
        assert_eq!(q.coeffs[(0, 2)], 0.0);
    }
}
