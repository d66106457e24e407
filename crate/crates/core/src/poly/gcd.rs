//! Multivariate gcd over Q by recursive primitive remainder sequences.

use num_traits::One;

use super::{MultiPoly, Rat};

/// Pseudo-remainder of `a` by `b` as polynomials in `x`.
pub fn prem(a: &MultiPoly, b: &MultiPoly, x: &str) -> MultiPoly {
    let db = b.degree_in(x);
    let da = a.degree_in(x);
    if da < db {
        return a.clone();
    }
    let lc = b.coeffs_in(x).pop().unwrap();
    let xv = MultiPoly::var(x);
    let mut r = a.clone();
    let mut e = da - db + 1;
    while !r.is_zero() && r.degree_in(x) >= db {
        let dr = r.degree_in(x);
        let lr = r.coeffs_in(x).pop().unwrap();
        let t = &lr * &xv.pow(dr - db);
        r = &(&r * &lc) - &(&t * b);
        e -= 1;
    }
    &r * &lc.pow(e)
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &MultiPoly, x: &str) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in p.coeffs_in(x) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn primitive_part_in(p: &MultiPoly, x: &str) -> MultiPoly {
    let c = content_in(p, x);
    if c.is_zero() {
        return MultiPoly::zero();
    }
    p.div_exact(&c).expect("content divides").primitive_integer()
}

fn monomial_gcd(m: &MultiPoly, p: &MultiPoly) -> MultiPoly {
    let (e, _) = m.terms().next().map(|(e, c)| (e.to_vec(), c.clone())).unwrap();
    let mut powers: Vec<(String, u32)> = m
        .vars()
        .iter()
        .zip(&e)
        .map(|(v, &k)| (v.clone(), k.min(p.low_degree_in(v))))
        .filter(|(_, k)| *k > 0)
        .collect();
    powers.sort();
    let refs: Vec<(&str, u32)> = powers.iter().map(|(v, k)| (v.as_str(), *k)).collect();
    MultiPoly::monomial(Rat::one(), &refs)
}

/// Greatest common divisor, normalized to integer coefficients with unit
/// content and positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.primitive_integer();
    }
    if b.is_zero() {
        return a.primitive_integer();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one();
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    // main variable: first shared one; if none are shared the gcd is a content gcd
    let shared = a.vars().iter().find(|v| b.has_var(v)).cloned();
    let Some(x) = shared else {
        let v = a.vars()[0].clone();
        let ca = content_in(a, &v);
        return gcd(&ca, b);
    };
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let gc = gcd(&ca, &cb);
    let mut f = a.div_exact(&ca).unwrap();
    let mut g = b.div_exact(&cb).unwrap();
    if f.degree_in(&x) < g.degree_in(&x) {
        std::mem::swap(&mut f, &mut g);
    }
    loop {
        if g.degree_in(&x) == 0 {
            // g free of x and primitive in x: gcd part in x is trivial
            return gc.primitive_integer();
        }
        let r = prem(&f, &g, &x);
        if r.is_zero() {
            return (&primitive_part_in(&g, &x) * &gc).primitive_integer();
        }
        f = g;
        g = primitive_part_in(&r, &x);
        if !g.has_var(&x) {
            return gc.primitive_integer();
        }
    }
}

pub fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero();
    }
    let g = gcd(a, b);
    (a * &b.div_exact(&g).unwrap()).primitive_integer()
}

/// Squarefree part with respect to all variables (product of distinct irreducible factors).
pub fn squarefree_part(p: &MultiPoly) -> MultiPoly {
    let f = p.primitive_integer();
    // gcd(f, all partials) = product of p_i^(e_i - 1) in characteristic zero
    let mut g = f.clone();
    for v in f.vars() {
        g = gcd(&g, &f.derivative(v));
        if g.is_constant() {
            return f;
        }
    }
    f.div_exact(&g).unwrap().primitive_integer()
}
