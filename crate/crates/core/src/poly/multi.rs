use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;

/// Exponent vector ordered graded-lexicographically (total degree first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over the rationals.
///
/// Variables are kept sorted by name and trimmed: a variable is listed only if
/// some term carries it with positive exponent. Together with the ordered term
/// map this makes structural equality coincide with polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Mono, Rat>,
}

impl Default for MultiPoly {
    fn default() -> Self {
        Self::zero()
    }
}

fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    out.sort();
    out.dedup();
    out
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(Vec::new()), c);
        }
        MultiPoly { vars: Vec::new(), terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(Rat::one(), &[(name, 1)])
    }

    pub fn monomial(c: Rat, powers: &[(&str, u32)]) -> Self {
        let mut vars: Vec<String> = powers.iter().map(|(v, _)| v.to_string()).collect();
        vars.sort();
        vars.dedup();
        let mut exps = vec![0u32; vars.len()];
        for (v, e) in powers {
            let k = vars.iter().position(|x| x == v).unwrap();
            exps[k] += e;
        }
        Self::from_terms(vars, vec![(exps, c)])
    }

    /// Build from raw terms over the given variable list (any order, duplicates summed).
    pub fn from_terms(vars: Vec<String>, terms: Vec<(Vec<u32>, Rat)>) -> Self {
        let mut sorted_vars = vars.clone();
        sorted_vars.sort();
        sorted_vars.dedup();
        let slot: Vec<usize> =
            vars.iter().map(|v| sorted_vars.binary_search(v).unwrap()).collect();
        let mut map: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let mut ex = vec![0u32; sorted_vars.len()];
            for (i, v) in e.iter().enumerate() {
                ex[slot[i]] += v;
            }
            let entry = map.entry(Mono(ex)).or_insert_with(Rat::zero);
            *entry += c;
        }
        map.retain(|_, c| !c.is_zero());
        MultiPoly { vars: sorted_vars, terms: map }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        let n = self.vars.len();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        if used.iter().all(|&u| u) {
            return self;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| {
                let e = m.0.iter().zip(&used).filter(|(_, &u)| u).map(|(e, _)| *e).collect();
                (Mono(e), c)
            })
            .collect();
        MultiPoly { vars, terms }
    }

    /// Terms re-indexed against a superset of our variables.
    fn aligned(&self, vars: &[String]) -> BTreeMap<Mono, Rat> {
        if vars == self.vars.as_slice() {
            return self.terms.clone();
        }
        let map: Vec<usize> =
            self.vars.iter().map(|v| vars.iter().position(|w| w == v).unwrap()).collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; vars.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    e[map[i]] = x;
                }
                (Mono(e), c.clone())
            })
            .collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn has_var(&self, v: &str) -> bool {
        self.vars.iter().any(|x| x == v)
    }

    fn var_index(&self, v: &str) -> Option<usize> {
        self.vars.iter().position(|x| x == v)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in descending term order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> {
        self.terms.iter().rev().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn leading_term(&self) -> Option<(&[u32], &Rat)> {
        self.terms.iter().next_back().map(|(m, c)| (m.0.as_slice(), c))
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        match self.var_index(v) {
            None => 0,
            Some(k) => self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0),
        }
    }

    /// Smallest exponent of `v` over all terms.
    pub fn low_degree_in(&self, v: &str) -> u32 {
        match self.var_index(v) {
            None => 0,
            Some(k) => self.terms.keys().map(|m| m.0[k]).min().unwrap_or(0),
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Exponent of `v` in a term of `exps` (which is indexed like `vars()`).
    pub fn exponent_of(&self, exps: &[u32], v: &str) -> u32 {
        self.var_index(v).map(|k| exps[k]).unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    fn add_impl(&self, other: &Self, sign: bool) -> Self {
        let vars = merge_vars(&self.vars, &other.vars);
        let mut terms = self.aligned(&vars);
        for (m, c) in other.aligned(&vars) {
            let e = terms.entry(m).or_insert_with(Rat::zero);
            if sign {
                *e += c;
            } else {
                *e -= c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { vars, terms }.trimmed()
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let vars = merge_vars(&self.vars, &other.vars);
        let a = self.aligned(&vars);
        let b = other.aligned(&vars);
        let mut terms: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let entry = terms.entry(Mono(e)).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { vars, terms }
    }

    /// Coefficients with respect to `v`, lowest degree first.
    pub fn coeffs_in(&self, v: &str) -> Vec<MultiPoly> {
        let Some(k) = self.var_index(v) else {
            return vec![self.clone()];
        };
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Vec<u32>, Rat)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let d = e[k] as usize;
            e[k] = 0;
            buckets[d].push((e, c.clone()));
        }
        buckets
            .into_iter()
            .map(|t| MultiPoly::from_terms(self.vars.clone(), t))
            .collect()
    }

    pub fn from_coeffs(v: &str, coeffs: &[MultiPoly]) -> Self {
        let x = MultiPoly::var(v);
        let mut out = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            out = &(&out * &x) + c;
        }
        out
    }

    /// Substitute a rational value for `v`.
    pub fn eval(&self, v: &str, val: &Rat) -> Self {
        let Some(k) = self.var_index(v) else {
            return self.clone();
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let d = e[k];
            e[k] = 0;
            let p = num_traits::pow::pow(val.clone(), d as usize);
            terms.push((e, c * p));
        }
        MultiPoly::from_terms(self.vars.clone(), terms)
    }

    /// Substitute a polynomial for `v`.
    pub fn subs(&self, v: &str, val: &MultiPoly) -> Self {
        if !self.has_var(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut out = MultiPoly::zero();
        for c in coeffs.iter().rev() {
            out = &(&out * val) + c;
        }
        out
    }

    pub fn rename(&self, from: &str, to: &str) -> Self {
        if !self.has_var(from) {
            return self.clone();
        }
        let vars: Vec<String> =
            self.vars.iter().map(|x| if x == from { to.to_string() } else { x.clone() }).collect();
        let terms = self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())).collect();
        MultiPoly::from_terms(vars, terms)
    }

    pub fn derivative(&self, v: &str) -> Self {
        let Some(k) = self.var_index(v) else {
            return Self::zero();
        };
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let d = m.0[k];
            if d == 0 {
                continue;
            }
            let mut e = m.0.clone();
            e[k] = d - 1;
            terms.push((e, c * Rat::from_integer(BigInt::from(d))));
        }
        MultiPoly::from_terms(self.vars.clone(), terms)
    }

    /// Divide out the largest monomial dividing every term; returns (monomial exponents, quotient).
    pub fn split_monomial_content(&self) -> (Vec<(String, u32)>, MultiPoly) {
        if self.is_zero() {
            return (Vec::new(), Self::zero());
        }
        let n = self.vars.len();
        let mut low = vec![u32::MAX; n];
        for m in self.terms.keys() {
            for i in 0..n {
                low[i] = low[i].min(m.0[i]);
            }
        }
        let content: Vec<(String, u32)> = self
            .vars
            .iter()
            .zip(&low)
            .filter(|(_, &e)| e > 0)
            .map(|(v, &e)| (v.clone(), e))
            .collect();
        if content.is_empty() {
            return (content, self.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.0.iter().zip(&low).map(|(a, b)| a - b).collect(), c.clone()))
            .collect();
        (content, MultiPoly::from_terms(self.vars.clone(), terms))
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if d.vars.iter().any(|v| !self.has_var(v)) {
            return None;
        }
        let vars = self.vars.clone();
        let dt = d.aligned(&vars);
        let (dl, dc) = dt.iter().next_back().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let dc_inv = dc.recip();
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Mono, Rat> = BTreeMap::new();
        while let Some((rl, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if rl.0.iter().zip(&dl.0).any(|(a, b)| a < b) {
                return None;
            }
            let qe = Mono(rl.0.iter().zip(&dl.0).map(|(a, b)| a - b).collect());
            let qc = &rc * &dc_inv;
            for (m, c) in &dt {
                let e = Mono(m.0.iter().zip(&qe.0).map(|(a, b)| a + b).collect());
                let entry = rem.entry(e.clone()).or_insert_with(Rat::zero);
                *entry -= c * &qc;
                if entry.is_zero() {
                    rem.remove(&e);
                }
            }
            quot.insert(qe, qc);
        }
        Some(MultiPoly { vars, terms: quot }.trimmed())
    }

    /// Scale to integer coefficients with unit gcd and positive leading coefficient.
    pub fn primitive_integer(&self) -> MultiPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&lcm / c.denom());
            g = g.gcd(&n);
        }
        let mut s = Rat::new(lcm, g);
        if self.leading_coeff().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Rational content such that `self = content * primitive_integer()`.
    pub fn rational_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let p = self.primitive_integer();
        self.leading_coeff() / p.leading_coeff()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| rat_to_f64(c).abs()).fold(0.0, f64::max)
    }

    /// Terms as floats against an explicit variable order (missing variables get exponent 0).
    pub fn float_terms(&self, order: &[&str]) -> Vec<(Vec<u32>, f64)> {
        let map: Vec<Option<usize>> =
            self.vars.iter().map(|v| order.iter().position(|w| w == v)).collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; order.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    if let Some(j) = map[i] {
                        e[j] = x;
                    }
                }
                (e, rat_to_f64(c))
            })
            .collect()
    }

    /// Numerical evaluation; variables not bound evaluate to zero.
    pub fn eval_complex(&self, bindings: &[(&str, Complex64)]) -> Complex64 {
        let vals: Vec<Complex64> = self
            .vars
            .iter()
            .map(|v| {
                bindings
                    .iter()
                    .find(|(n, _)| n == v)
                    .map(|(_, z)| *z)
                    .unwrap_or_else(|| Complex64::new(0.0, 0.0))
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= vals[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Sum of |c|·Π|x|^e, the natural scale for relative residuals.
    pub fn abs_scale(&self, bindings: &[(&str, Complex64)]) -> f64 {
        let vals: Vec<f64> = self
            .vars
            .iter()
            .map(|v| bindings.iter().find(|(n, _)| n == v).map(|(_, z)| z.norm()).unwrap_or(0.0))
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .enumerate()
                    .fold(rat_to_f64(c).abs(), |acc, (i, &e)| acc * vals[i].powi(e as i32))
            })
            .sum()
    }

    /// Exact square root, if `self` is a perfect square.
    pub fn sqrt(&self) -> Option<MultiPoly> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (lm, lc) = self.terms.iter().next_back()?;
        if lm.0.iter().any(|e| e % 2 == 1) {
            return None;
        }
        let c = rat_sqrt(lc)?;
        let vars = self.vars.clone();
        let lead = MultiPoly {
            vars: vars.clone(),
            terms: [(Mono(lm.0.iter().map(|e| e / 2).collect()), c)].into_iter().collect(),
        }
        .trimmed();
        let mut root = lead.clone();
        let two_lead = lead.scale(&Rat::from_integer(BigInt::from(2)));
        let mut last: Option<Mono> = None;
        for _ in 0..=self.terms.len() + 2 {
            let r = self - &(&root * &root);
            if r.is_zero() {
                return Some(root);
            }
            let (rm, rc) = r.leading_term().map(|(m, c)| (m.to_vec(), c.clone()))?;
            let rpoly = MultiPoly::from_terms(r.vars.clone(), vec![(rm, rc)]);
            let t = rpoly.div_exact(&two_lead)?;
            if !t.is_monomial() {
                return None;
            }
            let tv = t.aligned(&merge_vars(&t.vars, &vars));
            let tm = tv.keys().next().cloned()?;
            if let Some(prev) = &last {
                if tm >= *prev {
                    return None;
                }
            }
            last = Some(tm);
            root = &root + &t;
        }
        None
    }
}

pub fn rat_to_f64(c: &Rat) -> f64 {
    match (c.numer().to_f64(), c.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge components: scale down by the common bit length
            let shift = c.numer().bits().max(c.denom().bits()).saturating_sub(1000);
            let n = (c.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (c.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn rat_sqrt(c: &Rat) -> Option<Rat> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                $body(self, rhs)
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                $body(&self, &rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: &MultiPoly) -> MultiPoly {
                $body(&self, rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &MultiPoly, b: &MultiPoly| a.add_impl(b, true));
binop!(Sub, sub, |a: &MultiPoly, b: &MultiPoly| a.add_impl(b, false));
binop!(Mul, mul, |a: &MultiPoly, b: &MultiPoly| a.mul_impl(b));

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.degree() == 0 {
                parts.push(a.to_string());
            }
            for (v, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => parts.push(v.clone()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
