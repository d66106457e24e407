use std::fmt;
use std::ops::Mul;

use super::{MultiPoly, RatFn};

/// 2×2 matrix over the rational-function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[RatFn; 2]; 2]);

impl Mat2 {
    pub fn new(a: RatFn, b: RatFn, c: RatFn, d: RatFn) -> Mat2 {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_polys(a: MultiPoly, b: MultiPoly, c: MultiPoly, d: MultiPoly) -> Mat2 {
        Mat2::new(RatFn::from_poly(a), RatFn::from_poly(b), RatFn::from_poly(c), RatFn::from_poly(d))
    }

    pub fn identity() -> Mat2 {
        Mat2::new(RatFn::one(), RatFn::zero(), RatFn::zero(), RatFn::one())
    }

    pub fn scalar(c: RatFn) -> Mat2 {
        Mat2::new(c.clone(), RatFn::zero(), RatFn::zero(), c)
    }

    pub fn diag(a: RatFn, d: RatFn) -> Mat2 {
        Mat2::new(a, RatFn::zero(), RatFn::zero(), d)
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFn {
        &self.0[i][j]
    }

    pub fn det(&self) -> RatFn {
        let [[a, b], [c, d]] = &self.0;
        &(a * d) - &(b * c)
    }

    pub fn trace(&self) -> RatFn {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let [[a, b], [c, d]] = &self.0;
        Some(Mat2::new(d / &det, &(-b) / &det, &(-c) / &det, a / &det))
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &self.0[i][j] - &o.0[i][j];
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        self.0[0][1].is_zero() && self.0[1][0].is_zero()
    }

    pub fn entries(&self) -> impl Iterator<Item = &RatFn> {
        self.0.iter().flatten()
    }

    pub fn commutes_with(&self, o: &Mat2) -> bool {
        (self * o).sub(&(o * self)).is_zero()
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        let e = |i: usize, j: usize| &(&self.0[i][0] * &o.0[0][j]) + &(&self.0[i][1] * &o.0[1][j]);
        Mat2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}
