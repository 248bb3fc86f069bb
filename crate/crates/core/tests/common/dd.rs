//! Double-double arithmetic (about 32 significant digits) for re-running the
//! premise recursion at higher precision than the code under test.

use std::ops::{Add, Mul, Sub};

use parafis_core::numerics::{Matrix, Vector};

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `1 / n` to double-double precision.
    pub fn recip(n: u64) -> Self {
        let q = 1.0 / n as f64;
        // One Newton step: q + q·(1 − n·q).
        let r = Dd::from(1.0) - Dd::from(n as f64) * Dd::from(q);
        Dd::from(q) + r * Dd::from(q)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd {
            hi: -o.hi,
            lo: -o.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

/// Sum with double-double accumulation, rounded once.
pub fn accurate_sum(values: &[f64]) -> f64 {
    values
        .iter()
        .fold(Dd::default(), |acc, &v| acc + Dd::from(v))
        .to_f64()
}

/// Center and covariance recursion with fading factor `1 / min(k, tmax)`.
pub struct DdPremise {
    center: Vec<Dd>,
    cov: Vec<Vec<Dd>>,
    count: u64,
    tmax: u64,
}

impl DdPremise {
    pub fn new(center: &Vector, cov: &Matrix, count: u64, tmax: u64) -> Self {
        let d = center.len();
        Self {
            center: center.iter().map(|&v| Dd::from(v)).collect(),
            cov: (0..d)
                .map(|i| (0..d).map(|j| Dd::from(cov[(i, j)])).collect())
                .collect(),
            count,
            tmax,
        }
    }

    pub fn update(&mut self, x: &Vector) {
        self.count += 1;
        let alpha = Dd::recip(self.count.min(self.tmax));
        let keep = Dd::from(1.0) - alpha;
        for (m, &xi) in self.center.iter_mut().zip(x.iter()) {
            *m = keep * *m + alpha * Dd::from(xi);
        }
        let diff: Vec<Dd> = x
            .iter()
            .zip(&self.center)
            .map(|(&xi, &m)| Dd::from(xi) - m)
            .collect();
        for (i, row) in self.cov.iter_mut().enumerate() {
            for (j, a) in row.iter_mut().enumerate() {
                *a = keep * *a + alpha * diff[i] * diff[j];
            }
        }
    }

    pub fn to_f64(&self) -> (Vector, Matrix) {
        let d = self.center.len();
        (
            Vector::from_iterator(d, self.center.iter().map(|v| v.to_f64())),
            Matrix::from_fn(d, d, |i, j| self.cov[i][j].to_f64()),
        )
    }
}

#[test]
fn recip_is_exact_enough() {
    let third = Dd::recip(3);
    let back = third * Dd::from(3.0) - Dd::from(1.0);
    assert!(back.to_f64().abs() < 1e-30);
}

#[test]
fn accurate_sum_cancels() {
    assert_eq!(accurate_sum(&[1e16, 1.0, -1e16]), 1.0);
}
