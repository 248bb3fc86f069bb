//! Dense linear-algebra kernels shared by the learners.
//!
//! Dimensions here are small (a handful of features), so everything works on
//! dynamically sized `nalgebra` values and favours plain, exact formulas over
//! clever factorisation tricks.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Relative ridge added to a covariance before it is inverted.
pub const PD_RIDGE: f64 = 1e-6;

/// Absolute floor on the ridge, used when the covariance has collapsed to zero.
pub const PD_RIDGE_FLOOR: f64 = 1e-12;

/// Guard on the Sherman-Morrison downdate denominator.
pub const DOWNDATE_EPS: f64 = 1e-8;

/// Squared Mahalanobis distance `(x - mu)ᵀ A⁻¹ (x - mu)`, given `A⁻¹`.
pub fn mahalanobis_sq(x: &Vector, mu: &Vector, a_inv: &Matrix) -> Result<f64> {
    check_dim(mu.len(), x.len())?;
    check_dim(mu.len(), a_inv.nrows())?;
    check_dim(mu.len(), a_inv.ncols())?;
    let diff = x - mu;
    // Clamp tiny negative values caused by round-off on a PD matrix.
    Ok(quad_form(a_inv, &diff).max(0.0))
}

/// `vᵀ M v` without allocating.
pub fn quad_form(m: &Matrix, v: &Vector) -> f64 {
    let n = v.len();
    let mut acc = 0.0;
    for j in 0..n {
        let mut col = 0.0;
        for i in 0..n {
            col += m[(i, j)] * v[i];
        }
        acc += col * v[j];
    }
    acc
}

/// Weighted rank-one increment of an inverse correlation matrix, in place:
/// `C ← C − w·C x xᵀ C / (1 + w·xᵀ C x)`.
///
/// This is the Sherman-Morrison form of adding `w·x xᵀ` to `C⁻¹`. Returns the
/// gain `C_new x`, which the least-squares update needs next.
pub fn rank_one_increment(c: &mut Matrix, x: &Vector, w: f64) -> Vector {
    let cx = &*c * x;
    if w == 0.0 {
        return cx;
    }
    let denom = 1.0 + w * x.dot(&cx);
    c.ger(-w / denom, &cx, &cx, 1.0);
    symmetrize(c);
    cx / denom
}

/// Exact inverse of [`rank_one_increment`]: removes `w·x xᵀ` from `C⁻¹`.
///
/// Returns `C + w·C x xᵀ C / (1 − w·xᵀ C x)`. A denominator below
/// [`DOWNDATE_EPS`] means the point carries (nearly) all the information in
/// some direction; the downdate is refused and `C` is left as is.
pub fn sherman_morrison_downdate(c: &Matrix, x: &Vector, w: f64) -> Result<Matrix> {
    let mut out = c.clone();
    downdate_in_place(&mut out, x, w)?;
    Ok(out)
}

pub fn downdate_in_place(c: &mut Matrix, x: &Vector, w: f64) -> Result<()> {
    check_dim(c.nrows(), x.len())?;
    if w == 0.0 {
        return Ok(());
    }
    let cx = &*c * x;
    let denom = 1.0 - w * x.dot(&cx);
    if denom < DOWNDATE_EPS {
        return Err(Error::NearSingularDowndate { denominator: denom });
    }
    c.ger(w / denom, &cx, &cx, 1.0);
    symmetrize(c);
    Ok(())
}

/// Radius of the unit-level ellipsoid `{z : (z−μ)ᵀA⁻¹(z−μ) = 1}` along the
/// unit direction `u`, i.e. `1 / sqrt(uᵀ A⁻¹ u)`.
pub fn ellipsoid_radius_along(a: &Matrix, u: &Vector) -> Result<f64> {
    check_dim(a.nrows(), u.len())?;
    check_dim(a.ncols(), u.len())?;
    let chol = a.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let solved = chol.solve(u);
    let q = u.dot(&solved);
    if q <= 0.0 || !q.is_finite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(q.sqrt().recip())
}

/// Same radius, computed from an already available inverse.
pub fn radius_from_inverse(a_inv: &Matrix, u: &Vector) -> f64 {
    quad_form(a_inv, u).sqrt().recip()
}

/// Ridge used by [`regularized_inverse`]: `PD_RIDGE · trace(A) / d`, floored.
pub fn pd_ridge(a: &Matrix) -> f64 {
    let d = a.nrows().max(1) as f64;
    (PD_RIDGE * a.trace() / d).max(PD_RIDGE_FLOOR)
}

/// Inverse of `A + ε·I` with `ε` from [`pd_ridge`].
pub fn regularized_inverse(a: &Matrix) -> Result<Matrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    let mut reg = a.clone();
    let eps = pd_ridge(a);
    for i in 0..reg.nrows() {
        reg[(i, i)] += eps;
    }
    let mut inv = reg.cholesky().ok_or(Error::NotPositiveDefinite)?.inverse();
    symmetrize(&mut inv);
    Ok(inv)
}

/// Replaces `m` with `(m + mᵀ) / 2`.
pub fn symmetrize(m: &mut Matrix) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn mahalanobis_identity_and_euclidean() {
        let a_inv = Matrix::from_diagonal(&v(&[0.25, 1.0]));
        let mu = v(&[1.0, -2.0]);
        assert_eq!(mahalanobis_sq(&mu, &mu, &a_inv).unwrap(), 0.0);

        let eye = Matrix::identity(2, 2);
        let d = mahalanobis_sq(&v(&[3.0, 4.0]), &v(&[0.0, 0.0]), &eye).unwrap();
        assert!(close(d, 25.0, 1e-12));
    }

    #[test]
    fn mahalanobis_diag_hand_value() {
        // A = diag(4, 1), x - mu = (2, 1): 2²/4 + 1²/1 = 2
        let a_inv = Matrix::from_diagonal(&v(&[0.25, 1.0]));
        let d = mahalanobis_sq(&v(&[2.0, 1.0]), &v(&[0.0, 0.0]), &a_inv).unwrap();
        assert!(close(d, 2.0, 1e-12));
    }

    #[test]
    fn mahalanobis_dimension_mismatch() {
        let eye = Matrix::identity(2, 2);
        let err = mahalanobis_sq(&v(&[1.0, 2.0, 3.0]), &v(&[0.0, 0.0]), &eye);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scalar_increment_then_downdate() {
        let mut c = Matrix::from_element(1, 1, 100.0);
        let x = v(&[1.0]);
        rank_one_increment(&mut c, &x, 1.0);
        assert!(close(c[(0, 0)], 100.0 / 101.0, 1e-12));
        let back = sherman_morrison_downdate(&c, &x, 1.0).unwrap();
        assert!(close(back[(0, 0)], 100.0, 1e-10));
    }

    #[test]
    fn round_trip_from_omega_identity() {
        let mut c = Matrix::identity(2, 2) * 100.0;
        let x = v(&[1.0, 0.0]);
        rank_one_increment(&mut c, &x, 1.0);
        let back = sherman_morrison_downdate(&c, &x, 1.0).unwrap();
        assert!((back - Matrix::identity(2, 2) * 100.0).norm() < 1e-10);
    }

    #[test]
    fn zero_weight_is_noop() {
        let c = Matrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, 2.0]);
        let x = v(&[0.3, -1.2]);
        assert_eq!(sherman_morrison_downdate(&c, &x, 0.0).unwrap(), c);
        let mut c2 = c.clone();
        rank_one_increment(&mut c2, &x, 0.0);
        assert_eq!(c2, c);
    }

    #[test]
    fn downdate_refuses_near_singular_removal() {
        // C = 1 and w·xᵀCx = 1 makes the denominator exactly zero.
        let c = Matrix::from_element(1, 1, 1.0);
        let err = sherman_morrison_downdate(&c, &v(&[1.0]), 1.0);
        assert!(matches!(err, Err(Error::NearSingularDowndate { .. })));
    }

    #[test]
    fn ellipsoid_radius_examples() {
        let eye = Matrix::identity(2, 2);
        let u = v(&[0.6, 0.8]);
        assert!(close(ellipsoid_radius_along(&eye, &u).unwrap(), 1.0, 1e-12));

        let a = Matrix::from_diagonal(&v(&[4.0, 1.0]));
        assert!(close(
            ellipsoid_radius_along(&a, &v(&[1.0, 0.0])).unwrap(),
            2.0,
            1e-12
        ));

        // uᵀA⁻¹u = (1/4 + 1)/2 = 5/8, radius = sqrt(8/5) = 2·sqrt(2/5)
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let r = ellipsoid_radius_along(&a, &v(&[s, s])).unwrap();
        assert!(close(r, 2.0 * (2.0f64 / 5.0).sqrt(), 1e-12));
        assert!(close(r, 1.2649110640673518, 1e-12));
    }

    #[test]
    fn ellipsoid_radius_rejects_indefinite() {
        let a = Matrix::from_diagonal(&v(&[1.0, -1.0]));
        assert!(matches!(
            ellipsoid_radius_along(&a, &v(&[1.0, 0.0])),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn regularized_inverse_handles_zero_matrix() {
        let z = Matrix::zeros(3, 3);
        let inv = regularized_inverse(&z).unwrap();
        assert!(inv.iter().all(|x| x.is_finite()));
        assert!(inv[(0, 0)] > 0.0);
    }

    #[test]
    fn regularized_inverse_is_exact_for_ridged_matrix() {
        let a = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let inv = regularized_inverse(&a).unwrap();
        let eps = pd_ridge(&a);
        let ridged = &a + Matrix::identity(2, 2) * eps;
        assert!((inv * ridged - Matrix::identity(2, 2)).norm() < 1e-12);
    }
}
