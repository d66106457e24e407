use num_complex::Complex64;

use super::code::{presentation, Gen, Presentation, TwoBridgeCode, Word};
use crate::error::{Error, Result};
use crate::numeric::{poly_roots, CMat2};
use crate::poly::gcd::{content_in, prem};
use crate::poly::{gcd, Mat2, MultiPoly, RatFn};

/// Riley normal form of a two-bridge group over Q(m, u) (knots) or
/// Q(m1, m2, u) (links): a ↦ [[m_a, 1], [0, 1/m_a]], b ↦ [[m_b, 0], [u, 1/m_b]].
#[derive(Clone, Debug)]
pub struct RepFamily {
    pub presentation: Presentation,
    /// Meridian eigenvalue parameters, one per component.
    pub meridian_vars: Vec<String>,
    pub a: Mat2,
    pub b: Mat2,
}

pub const U: &str = "u";

fn upper(m: &str) -> Mat2 {
    Mat2::new(RatFn::var(m), RatFn::one(), RatFn::zero(), RatFn::var(m).recip())
}

fn lower(m: &str) -> Mat2 {
    Mat2::new(RatFn::var(m), RatFn::zero(), RatFn::var(U), RatFn::var(m).recip())
}

pub fn rep_family(code: &TwoBridgeCode) -> Result<RepFamily> {
    let presentation = presentation(code)?;
    let meridian_vars: Vec<String> =
        if code.is_knot() { vec!["m".into()] } else { vec!["m1".into(), "m2".into()] };
    let ma = &meridian_vars[0];
    let mb = meridian_vars.last().unwrap();
    let fam = RepFamily { presentation, a: upper(ma), b: lower(mb), meridian_vars };
    debug_assert!(fam.a.det().is_one() && fam.b.det().is_one());
    Ok(fam)
}

impl RepFamily {
    pub fn code(&self) -> TwoBridgeCode {
        self.presentation.code
    }

    pub fn components(&self) -> usize {
        self.meridian_vars.len()
    }

    /// Meridian generator of component i (1-based).
    pub fn meridian_gen(&self, i: usize) -> Gen {
        if i == 1 {
            Gen::A
        } else {
            Gen::B
        }
    }

    pub fn generator(&self, g: Gen) -> &Mat2 {
        match g {
            Gen::A => &self.a,
            Gen::B => &self.b,
        }
    }

    pub fn word_matrix(&self, w: &Word) -> Mat2 {
        let inv_a = self.a.inverse().expect("unimodular");
        let inv_b = self.b.inverse().expect("unimodular");
        let mut acc = Mat2::identity();
        for &(g, e) in &w.0 {
            let m = match (g, e > 0) {
                (Gen::A, true) => &self.a,
                (Gen::A, false) => &inv_a,
                (Gen::B, true) => &self.b,
                (Gen::B, false) => &inv_b,
            };
            acc = &acc * m;
        }
        acc
    }

    pub fn longitude_matrix(&self, i: usize) -> Mat2 {
        self.word_matrix(&self.presentation.longitudes[i - 1])
    }

    /// Numeric generator images at meridian eigenvalues `ms` and correlation `u`.
    pub fn numeric_generators(&self, ms: &[Complex64], u: Complex64) -> (CMat2, CMat2) {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let ma = ms[0];
        let mb = *ms.last().unwrap();
        (CMat2([[ma, one], [zero, one / ma]]), CMat2([[mb, zero], [u, one / mb]]))
    }

    pub fn numeric_word(&self, w: &Word, ms: &[Complex64], u: Complex64) -> CMat2 {
        let (a, b) = self.numeric_generators(ms, u);
        let (ia, ib) = (a.inverse_sl2(), b.inverse_sl2());
        w.0.iter().fold(CMat2::identity(), |acc, &(g, e)| {
            let m = match (g, e > 0) {
                (Gen::A, true) => &a,
                (Gen::A, false) => &ia,
                (Gen::B, true) => &b,
                (Gen::B, false) => &ib,
            };
            acc.mul(m)
        })
    }

    /// Relator condition as a matrix that must vanish: W·A − B·W (knots) or A·W − W·A (links).
    pub fn relation_matrix(&self) -> Mat2 {
        let w = self.word_matrix(&self.presentation.w);
        if self.code().is_knot() {
            (&w * &self.a).sub(&(&self.b * &w))
        } else {
            (&self.a * &w).sub(&(&w * &self.a))
        }
    }

    /// Roots in u of the Riley polynomial at the given meridian eigenvalues.
    pub fn solve_u(&self, riley: &MultiPoly, ms: &[Complex64]) -> Vec<Complex64> {
        let bind: Vec<(&str, Complex64)> =
            self.meridian_vars.iter().map(|s| s.as_str()).zip(ms.iter().copied()).collect();
        let coeffs: Vec<Complex64> = riley.coeffs_in(U).iter().map(|c| c.eval_complex(&bind)).collect();
        poly_roots(&coeffs)
    }

    /// Symbolic commutation of each longitude with its meridian, modulo the
    /// Riley polynomial.
    pub fn check_longitudes(&self, riley: &MultiPoly) -> Result<()> {
        for i in 1..=self.components() {
            let l = self.longitude_matrix(i);
            let x = self.generator(self.meridian_gen(i));
            let c = (&l * x).sub(&(x * &l));
            for e in c.entries() {
                if !e.is_zero() && !prem(e.num(), riley, U).is_zero() {
                    return Err(Error::InconsistentFamily(format!(
                        "longitude {} = {} does not commute with its meridian",
                        i,
                        self.presentation.longitudes[i - 1]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Gcd of the numerators of the relation entries, with monomial factors and
/// u-free factors removed.
pub fn riley_polynomial(fam: &RepFamily) -> Result<MultiPoly> {
    let rel = fam.relation_matrix();
    let mut g = MultiPoly::zero();
    for e in rel.entries() {
        if !e.is_zero() {
            g = gcd(&g, e.num());
        }
    }
    if g.is_zero() {
        return Err(Error::InconsistentFamily("relation holds identically".into()));
    }
    let (_, g) = g.split_monomial_content();
    let g = if g.has_var(U) { g.div_exact(&content_in(&g, U)).unwrap_or(g) } else { g };
    if g.is_constant() || !g.has_var(U) {
        return Err(Error::InconsistentFamily(format!("entry conditions share no factor in u: {g}")));
    }
    Ok(g.primitive_integer())
}
