use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::gcd::content_in;
use crate::poly::{gcd, parse_poly, univariate_factor, MultiPoly, Rat, RatFn};

/// One factor {f, g}^e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolFactor {
    pub f: RatFn,
    pub g: RatFn,
    pub e: i64,
}

/// Formal product of Steinberg symbols. `torsion_flag` records that a known
/// 2-torsion element was discarded along the way.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FormalSymbol {
    pub factors: Vec<SymbolFactor>,
    pub torsion_flag: bool,
}

impl FormalSymbol {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn pair(f: RatFn, g: RatFn) -> Self {
        Self::power(f, g, 1)
    }

    pub fn power(f: RatFn, g: RatFn, e: i64) -> Self {
        let factors = if e == 0 { vec![] } else { vec![SymbolFactor { f, g, e }] };
        FormalSymbol { factors, torsion_flag: false }
    }

    /// {l, m}^ε on an eigenvalue curve.
    pub fn curve_symbol(epsilon: i64) -> Self {
        Self::power(RatFn::var("l"), RatFn::var("m"), epsilon)
    }

    pub fn mul(&self, o: &FormalSymbol) -> FormalSymbol {
        let mut factors = self.factors.clone();
        factors.extend(o.factors.iter().cloned());
        FormalSymbol { factors, torsion_flag: self.torsion_flag || o.torsion_flag }
    }

    pub fn pow(&self, k: i64) -> FormalSymbol {
        let factors = if k == 0 {
            vec![]
        } else {
            self.factors.iter().map(|s| SymbolFactor { e: s.e * k, ..s.clone() }).collect()
        };
        FormalSymbol { factors, torsion_flag: self.torsion_flag }
    }

    pub fn inverse(&self) -> FormalSymbol {
        self.pow(-1)
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Parse `{f, g}^e * {h, k}`; entries are polynomials or `(p)/(q)`.
    pub fn parse(text: &str) -> Result<FormalSymbol> {
        let mut out = FormalSymbol::identity();
        let mut rest = text.trim();
        if rest == "1" {
            return Ok(out);
        }
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c == '*' || c == '·' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            if !rest.starts_with('{') {
                return Err(Error::Parse(format!("expected '{{' at {rest:?}")));
            }
            let close = rest.find('}').ok_or_else(|| Error::Parse("unclosed '{'".into()))?;
            let body = &rest[1..close];
            let (f, g) = split_top_comma(body).ok_or_else(|| Error::Parse(format!("expected f, g in {{{body}}}")))?;
            rest = rest[close + 1..].trim_start();
            let mut e = 1i64;
            if let Some(r) = rest.strip_prefix('^') {
                let r = r.trim_start();
                let end = r
                    .char_indices()
                    .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                    .map(|(i, _)| i)
                    .unwrap_or(r.len());
                e = r[..end].parse().map_err(|_| Error::Parse(format!("bad exponent in {r:?}")))?;
                rest = &r[end..];
            }
            out = out.mul(&FormalSymbol::power(parse_ratfn(f)?, parse_ratfn(g)?, e));
        }
        Ok(out)
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Polynomial, or quotient `a/(b)` with a non-constant parenthesized denominator.
pub fn parse_ratfn(s: &str) -> Result<RatFn> {
    let s = s.trim();
    if let Ok(p) = parse_poly(s) {
        return Ok(RatFn::from_poly(p));
    }
    let mut depth = 0;
    let mut split = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 && s[i + 1..].trim_start().starts_with('(') => split = Some(i),
            _ => {}
        }
    }
    let i = split.ok_or_else(|| Error::Parse(format!("cannot read {s:?} as a rational function")))?;
    let den = parse_poly(&s[i + 1..])?;
    if den.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(RatFn::new(parse_poly(&s[..i])?, den))
}

impl fmt::Display for FormalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            write!(f, "1")?;
        }
        for (k, s) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{{{}, {}}}", s.f, s.g)?;
            if s.e != 1 {
                write!(f, "^{}", s.e)?;
            }
        }
        if self.torsion_flag {
            write!(f, " [2-torsion discarded]")?;
        }
        Ok(())
    }
}

/// Multiplicative atoms a symbol entry splits into.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Atom {
    /// Positive rational constant ≠ 1.
    Const(Rat),
    /// Primitive integer polynomial with positive leading coefficient.
    Poly(MultiPoly),
    MinusOne,
}

impl Atom {
    fn rank(&self) -> u8 {
        match self {
            Atom::Const(_) => 0,
            Atom::Poly(_) => 1,
            Atom::MinusOne => 2,
        }
    }

    fn to_ratfn(&self) -> RatFn {
        match self {
            Atom::Const(c) => RatFn::constant(c.clone()),
            Atom::Poly(p) => RatFn::from_poly(p.clone()),
            Atom::MinusOne => RatFn::from_int(-1),
        }
    }

    fn is_constant(&self) -> bool {
        !matches!(self, Atom::Poly(_))
    }
}

impl Ord for Atom {
    fn cmp(&self, o: &Self) -> Ordering {
        self.rank().cmp(&o.rank()).then_with(|| match (self, o) {
            (Atom::Const(a), Atom::Const(b)) => a.cmp(b),
            (Atom::Poly(a), Atom::Poly(b)) => a
                .total_degree()
                .cmp(&b.total_degree())
                .then_with(|| a.to_string().cmp(&b.to_string())),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn push_const(out: &mut Vec<(Atom, i64)>, c: &Rat, sign: i64) {
    if c.is_negative() {
        out.push((Atom::MinusOne, sign));
    }
    for (n, k) in [(c.numer().abs(), sign), (c.denom().clone(), -sign)] {
        for (q, e) in prime_split(n) {
            out.push((Atom::Const(Rat::from_integer(q)), k * e));
        }
    }
}

/// Prime powers of n by trial division below 10⁴; a larger cofactor is kept whole.
fn prime_split(mut n: BigInt) -> Vec<(BigInt, i64)> {
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while !n.is_one() && p < BigInt::from(10_000) {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

fn split_poly(p: &MultiPoly, sign: i64, out: &mut Vec<(Atom, i64)>) {
    let (mono, rest) = p.split_monomial_content();
    for (v, k) in mono {
        out.push((Atom::Poly(MultiPoly::var(&v)), sign * k as i64));
    }
    if let Some(c) = rest.constant_value() {
        push_const(out, &c, sign);
        return;
    }
    if rest.vars().len() == 1 {
        if let Ok(fac) = univariate_factor(&rest) {
            push_const(out, &fac.content, sign);
            for (f, k) in fac.factors {
                out.push((Atom::Poly(f), sign * k as i64));
            }
            return;
        }
    }
    // peel off contents with respect to each variable: splits products of
    // factors in disjoint variables without multivariate factorization
    for v in rest.vars() {
        let c = content_in(&rest, v);
        if !c.is_constant() {
            let q = rest.div_exact(&c).expect("content divides");
            split_poly(&c, sign, out);
            split_poly(&q, sign, out);
            return;
        }
    }
    // repeated factors
    for v in rest.vars() {
        let g = gcd(&rest, &rest.derivative(v));
        if !g.is_constant() {
            let q = rest.div_exact(&g).expect("gcd divides");
            split_poly(&g, sign, out);
            split_poly(&q, sign, out);
            return;
        }
    }
    let prim = rest.primitive_integer();
    let c = rest.leading_coeff() / prim.leading_coeff();
    push_const(out, &c, sign);
    out.push((Atom::Poly(prim), sign));
}

/// Factor a nonzero rational function into atoms with exponents.
fn split(f: &RatFn) -> Vec<(Atom, i64)> {
    let mut raw = Vec::new();
    split_poly(f.num(), 1, &mut raw);
    split_poly(f.den(), -1, &mut raw);
    let mut merged: Vec<(Atom, i64)> = Vec::new();
    for (a, k) in raw {
        match merged.iter_mut().find(|(b, _)| *b == a) {
            Some(slot) => slot.1 += k,
            None => merged.push((a, k)),
        }
    }
    merged.retain(|(a, k)| *k != 0 && !(*a == Atom::MinusOne && k % 2 == 0));
    merged
}

/// Rewrite one atom pair; None means the symbol is trivial.
fn reduce_pair(a: Atom, b: Atom, e: i64) -> Option<(Atom, Atom, i64)> {
    if e == 0 {
        return None;
    }
    if a == b {
        // {a, a} = {a, −1}; {−1, −1} is trivial over C
        return if a == Atom::MinusOne { None } else { reduce_pair(a, Atom::MinusOne, e) };
    }
    // symbols between constants and −1 are torsion in the uniquely divisible K₂(C)
    if a.is_constant() && b.is_constant() && (a == Atom::MinusOne || b == Atom::MinusOne) {
        return None;
    }
    let (fa, fb) = (a.to_ratfn(), b.to_ratfn());
    let one = RatFn::one();
    if &fa + &fb == one {
        return None;
    }
    // {a, a − 1} = {a, −1}, {a, a + 1} = {a + 1, −1}^{−1}
    if a != Atom::MinusOne && b != Atom::MinusOne {
        if &fa - &one == fb {
            return reduce_pair(a, Atom::MinusOne, e);
        }
        if &fb - &one == fa {
            return reduce_pair(b, Atom::MinusOne, -e);
        }
    }
    if a > b {
        return Some((b, a, -e));
    }
    Some((a, b, e))
}

/// Rewrite to a canonical product of atom symbols: bimultiplicativity on the
/// factorizations of the entries, skew-symmetry, the Steinberg relation and
/// its consequences {f, −f} = 1, {f, f} = {f, −1}.
pub fn symbol_normalize(s: &FormalSymbol) -> FormalSymbol {
    let mut acc: BTreeMap<(Atom, Atom), i64> = BTreeMap::new();
    let one = RatFn::one();
    for SymbolFactor { f, g, e } in &s.factors {
        if *e == 0 || f.is_one() || g.is_one() {
            continue;
        }
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let sum = f + g;
        if sum == one || sum.is_zero() {
            continue;
        }
        let gs: Vec<(Atom, i64)> = if f == g { vec![(Atom::MinusOne, 1)] } else { split(g) };
        for (a, x) in split(f) {
            for (b, y) in &gs {
                if let Some((a, b, k)) = reduce_pair(a.clone(), b.clone(), e * x * y) {
                    *acc.entry((a, b)).or_insert(0) += k;
                }
            }
        }
    }
    let factors = acc
        .into_iter()
        .filter_map(|((a, b), k)| {
            let k = if b == Atom::MinusOne { k.rem_euclid(2) } else { k };
            (k != 0).then(|| SymbolFactor { f: a.to_ratfn(), g: b.to_ratfn(), e: k })
        })
        .collect();
    FormalSymbol { factors, torsion_flag: s.torsion_flag }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(t: &str) -> FormalSymbol {
        symbol_normalize(&FormalSymbol::parse(t).unwrap())
    }

    #[test]
    fn rules() {
        assert!(sym("{x, y} * {y, x}").is_identity());
        assert!(sym("{x, 1 - x}").is_identity());
        assert!(sym("{x, -x}").is_identity());
        assert_eq!(sym("{x^2, y}"), sym("{x, y}^2"));
        assert_eq!(sym("{x, x}"), sym("{x, -1}"));
        assert_eq!(sym("{x, x}^2"), FormalSymbol::identity());
        assert!(sym("{-1, -1}").is_identity());
        assert!(sym("{x/(y), (y - x)/(y)}").is_identity());
    }

    #[test]
    fn parse_and_print() {
        let s = FormalSymbol::parse("{l, m}^-2 * {x, (x+1)/(y)}").unwrap();
        assert_eq!(s.factors.len(), 2);
        assert_eq!(s.factors[0].e, -2);
        assert_eq!(sym("{m, l}").to_string(), "{l, m}^-1");
    }

    #[test]
    fn idempotent() {
        for t in ["{x*y, (x+1)*(y-2)}^3", "{2*x, -x^2}", "{l, m} * {m, -1}"] {
            let a = sym(t);
            assert_eq!(symbol_normalize(&a), a, "{t}");
        }
    }
}
