use serde::Serialize;

use super::factor::{univariate_factor, univariate_var};
use super::MultiPoly;
use crate::error::Result;

pub fn totient(n: u64) -> u64 {
    let mut n0 = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n0 {
        if n0.is_multiple_of(p) {
            while n0.is_multiple_of(p) {
                n0 /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n0 > 1 {
        out -= out / n0;
    }
    out
}

/// The n-th cyclotomic polynomial in `var`, built as (x^n − 1) / Π_{d|n, d<n} Φ_d.
pub fn cyclotomic(n: u64, var: &str) -> MultiPoly {
    assert!(n >= 1);
    let x = MultiPoly::var(var);
    let mut p = &x.pow(n as u32) - &MultiPoly::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic(d, var)).expect("cyclotomic divisor");
        }
    }
    p
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CyclotomicCertificate {
    pub is_cyclotomic: bool,
    /// (n, multiplicity) for each factor matched to Φ_n.
    pub indices: Vec<(u64, u32)>,
    /// Power of the variable divided out before matching.
    pub monomial_power: u32,
    /// Irreducible factors that are not cyclotomic, as text.
    pub failures: Vec<String>,
}

/// Index n with Φ_n = f, for a primitive irreducible `f` of degree d.
/// φ(n) ≥ √(n/2) bounds the search by n ≤ 2d².
pub fn cyclotomic_index(f: &MultiPoly) -> Option<u64> {
    let var = f.vars().first()?.clone();
    let d = f.degree_in(&var) as u64;
    let hi = (2 * d * d).max(6);
    (1..=hi).find(|&n| totient(n) == d && &cyclotomic(n, &var) == f)
}

/// Decide whether every irreducible factor (ignoring content and powers of
/// the variable) is cyclotomic.
pub fn is_cyclotomic_product(p: &MultiPoly) -> Result<CyclotomicCertificate> {
    univariate_var(p)?;
    let fac = univariate_factor(p)?;
    let mut cert = CyclotomicCertificate {
        is_cyclotomic: true,
        indices: Vec::new(),
        monomial_power: 0,
        failures: Vec::new(),
    };
    for (f, k) in &fac.factors {
        if f.is_monomial() {
            cert.monomial_power = *k;
            continue;
        }
        match cyclotomic_index(f) {
            Some(n) => cert.indices.push((n, *k)),
            None => {
                cert.is_cyclotomic = false;
                cert.failures.push(f.to_string());
            }
        }
    }
    cert.indices.sort();
    Ok(cert)
}
