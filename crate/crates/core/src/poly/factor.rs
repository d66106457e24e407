//! Univariate factorization over Q: Yun squarefree split, then Zassenhaus
//! (Cantor–Zassenhaus mod p, linear Hensel lifting, subset recombination).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gcd::gcd;
use super::{MultiPoly, Rat};
use crate::error::{Error, Result};

pub const DEGREE_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub content: Rat,
    /// Primitive integer factors with positive leading coefficient, with multiplicities.
    pub factors: Vec<(MultiPoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.content.clone());
        for (f, k) in &self.factors {
            acc = &acc * &f.pow(*k);
        }
        acc
    }
}

type ZPoly = Vec<BigInt>;
type PPoly = Vec<u64>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().map(|c| c.is_zero()).unwrap_or(false) {
        a.pop();
    }
    a
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

/// Exact quotient over Z, if it exists.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    if b.is_empty() {
        return None;
    }
    let mut r: ZPoly = a.to_vec();
    if r.len() < b.len() {
        return if r.iter().all(|c| c.is_zero()) { Some(Vec::new()) } else { None };
    }
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &r[i + b.len() - 1];
        let (qq, rem) = top.div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &qq * bj;
        }
        q[i] = qq;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(ztrim(q))
}

fn zcontent(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn zprimitive(a: &[BigInt]) -> ZPoly {
    let mut g = zcontent(a);
    if a.last().map(|c| c.is_negative()).unwrap_or(false) {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

// ---- arithmetic mod a small prime ----

fn pmod(c: &BigInt, p: u64) -> u64 {
    let r = c.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

fn ptrim(mut a: PPoly) -> PPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pinv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn padd(a: &[u64], b: &[u64], p: u64) -> PPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    ptrim(out)
}

fn psub(a: &[u64], b: &[u64], p: u64) -> PPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    ptrim(out)
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> PPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(out)
}

fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (PPoly, PPoly) {
    let b = ptrim(b.to_vec());
    let mut r = ptrim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = pinv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = r[i + b.len() - 1] * inv % p;
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + p - c * bj % p) % p;
            }
        }
    }
    r.truncate(b.len() - 1);
    (ptrim(q), ptrim(r))
}

fn pmonic(a: &[u64], p: u64) -> PPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = pinv(l, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> PPoly {
    let mut x = ptrim(a.to_vec());
    let mut y = ptrim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = pdivrem(&x, &y, p);
        x = y;
        y = r;
    }
    pmonic(&x, p)
}

/// (s, t) with s·a + t·b = 1 mod p, for coprime a, b.
fn pxgcd(a: &[u64], b: &[u64], p: u64) -> (PPoly, PPoly) {
    let (mut r0, mut r1) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s2 = psub(&s0, &pmul(&q, &s1, p), p);
        let t2 = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let inv = pinv(r0[0], p);
    (
        s0.iter().map(|c| c * inv % p).collect(),
        t0.iter().map(|c| c * inv % p).collect(),
    )
}

fn ppowmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> PPoly {
    let mut r = vec![1u64];
    let (_, mut b) = pdivrem(base, m, p);
    for i in 0..e.bits() {
        if e.bit(i) {
            r = pdivrem(&pmul(&r, &b, p), m, p).1;
        }
        b = pdivrem(&pmul(&b, &b, p), m, p).1;
    }
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn ddf(f: &[u64], p: u64) -> Vec<(PPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 1;
    while f.len() > 2 * d {
        h = ppowmod(&h, &pe, &f, p);
        let g = pgcd(&f, &psub(&h, &x, p), p);
        if g.len() > 1 {
            f = pdivrem(&f, &g, p).0;
            h = pdivrem(&h, &f, p).1;
            out.push((g, d));
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus, odd p).
fn edf(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<PPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: PPoly = ptrim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = psub(&ppowmod(&a, &e, f, p), &[1], p);
        let g = pgcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let rest = pdivrem(f, &g, p).0;
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&pmonic(&rest, p), d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &[u64], p: u64, rng: &mut ChaCha8Rng) -> Vec<PPoly> {
    let mut out = Vec::new();
    for (g, d) in ddf(&pmonic(f, p), p) {
        out.extend(edf(&g, d, p, rng));
    }
    out
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..2000).filter(|n| (2..).take_while(|k| k * k <= *n).all(|k| n % k != 0))
}

fn zreduce(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lift F ≡ g·h (mod p), g monic, to F ≡ G·H (mod p^k).
fn hensel2(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (s, t) = pxgcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz = to_z(g);
    let mut hz = to_z(h);
    let mut pj = pb.clone();
    for _ in 1..k {
        let pj1 = &pj * &pb;
        let e: ZPoly = {
            let gh = zmul(&gz, &hz);
            let n = f.len().max(gh.len());
            (0..n)
                .map(|i| {
                    let a = f.get(i).cloned().unwrap_or_default();
                    let b = gh.get(i).cloned().unwrap_or_default();
                    (a - b).mod_floor(&pj1)
                })
                .collect()
        };
        let ep: PPoly = ptrim(e.iter().map(|c| pmod(&(c / &pj), p)).collect());
        if !ep.is_empty() {
            let tau0 = pmul(&t, &ep, p);
            let (q, tau) = pdivrem(&tau0, g, p);
            let sigma = padd(&pmul(&s, &ep, p), &pmul(&q, h, p), p);
            for (i, c) in tau.iter().enumerate() {
                gz[i] += &pj * BigInt::from(*c);
            }
            if hz.len() < sigma.len() {
                hz.resize(sigma.len(), BigInt::zero());
            }
            for (i, c) in sigma.iter().enumerate() {
                hz[i] += &pj * BigInt::from(*c);
            }
            gz = zreduce(&gz, &pj1);
            hz = zreduce(&hz, &pj1);
        }
        pj = pj1;
    }
    (gz, hz)
}

fn symmetric(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half: BigInt = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Irreducible factors of a primitive squarefree integer polynomial of degree ≥ 1.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![zprimitive(f)];
    }
    let lc = f.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let df: ZPoly = f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
    let mut best: Option<(u64, Vec<PPoly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if pmod(&lc, p) == 0 {
            continue;
        }
        let fp: PPoly = ptrim(f.iter().map(|c| pmod(c, p)).collect());
        let dfp: PPoly = ptrim(df.iter().map(|c| pmod(c, p)).collect());
        if pgcd(&fp, &dfp, p).len() != 1 {
            continue;
        }
        let facs = factor_mod_p(&fp, p, &mut rng);
        if facs.len() == 1 {
            return vec![zprimitive(f)];
        }
        if best.as_ref().map(|(_, b)| facs.len() < b.len()).unwrap_or(true) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, facs) = best.expect("some prime is good for a squarefree polynomial");

    // Mignotte-style bound on factor coefficients, times the leading coefficient
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let root = BigInt::from(((n + 1) as f64).sqrt().ceil() as u64);
    let bound: BigInt = (BigInt::one() << n) * root * maxc * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }

    // multifactor lift by peeling one factor at a time
    let mut lifted: Vec<ZPoly> = Vec::new();
    let mut target: ZPoly = f.to_vec();
    let lcp = pmod(&lc, p);
    for i in 0..facs.len() {
        if i == facs.len() - 1 {
            // make the last factor monic modulo p^k
            let linv = modinv(&target.last().unwrap().mod_floor(&pk), &pk).unwrap();
            lifted.push(zreduce(&target.iter().map(|c| c * &linv).collect::<Vec<_>>(), &pk));
            break;
        }
        let g = facs[i].clone();
        let mut h: PPoly = vec![lcp];
        for fj in &facs[i + 1..] {
            h = pmul(&h, fj, p);
        }
        let (gz, hz) = hensel2(&target, &g, &h, p, k);
        lifted.push(gz);
        target = hz;
    }

    // recombination
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        for sub in subsets(remaining.len(), size) {
            let lcf = f.last().unwrap().clone();
            let mut cand: ZPoly = vec![lcf.clone()];
            for &j in &sub {
                cand = zreduce(&zmul(&cand, &lifted[remaining[j]]), &pk);
            }
            let cand = zprimitive(&symmetric(&cand, &pk));
            if let Some(q) = zdiv_exact(&f, &cand) {
                out.push(cand);
                f = q;
                let chosen: Vec<usize> = sub.iter().map(|&j| remaining[j]).collect();
                remaining.retain(|r| !chosen.contains(r));
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.len() > 1 {
        out.push(zprimitive(&f));
    }
    out
}

fn modinv(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

fn to_dense(p: &MultiPoly, var: &str) -> ZPoly {
    let q = p.primitive_integer();
    q.coeffs_in(var)
        .iter()
        .map(|c| {
            let r = c.constant_value().unwrap_or_else(Rat::zero);
            debug_assert!(r.is_integer());
            r.to_integer()
        })
        .collect()
}

fn from_dense(a: &[BigInt], var: &str) -> MultiPoly {
    let terms =
        a.iter().enumerate().map(|(i, c)| (vec![i as u32], Rat::from_integer(c.clone()))).collect();
    MultiPoly::from_terms(vec![var.to_string()], terms)
}

pub(crate) fn univariate_var(p: &MultiPoly) -> Result<Option<String>> {
    match p.vars().len() {
        0 => Ok(None),
        1 => Ok(Some(p.vars()[0].clone())),
        _ => Err(Error::NotUnivariate(p.vars().to_vec())),
    }
}

fn sort_key(p: &MultiPoly) -> (u32, Vec<(Sign, Vec<u32>)>) {
    let v = p.vars().first().cloned().unwrap_or_default();
    let coeffs = p
        .coeffs_in(&v)
        .iter()
        .map(|c| {
            let r = c.constant_value().unwrap_or_else(Rat::zero);
            let (s, d) = r.numer().to_u32_digits();
            (s, d)
        })
        .collect();
    (p.total_degree(), coeffs)
}

/// Irreducible factorization over Q of a univariate polynomial.
pub fn univariate_factor(p: &MultiPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("factorization of the zero polynomial".into()));
    }
    let Some(x) = univariate_var(p)? else {
        return Ok(Factorization { content: p.constant_value().unwrap(), factors: Vec::new() });
    };
    let deg = p.degree_in(&x) as usize;
    if deg > DEGREE_CAP {
        return Err(Error::DegreeCap { degree: deg, cap: DEGREE_CAP });
    }
    let mut factors: Vec<(MultiPoly, u32)> = Vec::new();
    let (mono, rest) = p.split_monomial_content();
    if let Some((_, k)) = mono.first() {
        factors.push((MultiPoly::var(&x), *k));
    }
    let f = rest.primitive_integer();
    if !f.is_constant() {
        // Yun
        let df = f.derivative(&x);
        let b = gcd(&f, &df);
        let mut c = f.div_exact(&b).unwrap();
        let mut d = &df.div_exact(&b).unwrap() - &c.derivative(&x);
        let mut i = 1;
        while !c.is_constant() {
            let a = gcd(&c, &d);
            if !a.is_constant() {
                for z in zassenhaus(&to_dense(&a, &x)) {
                    factors.push((from_dense(&z, &x), i));
                }
            }
            c = c.div_exact(&a).unwrap();
            d = &d.div_exact(&a).unwrap() - &c.derivative(&x);
            i += 1;
        }
    }
    factors.sort_by_key(|(f, k)| (sort_key(f), *k));
    let mut prod = MultiPoly::one();
    for (f, k) in &factors {
        prod = &prod * &f.pow(*k);
    }
    let content = p.leading_coeff() / prod.leading_coeff();
    Ok(Factorization { content, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    fn strs(f: &Factorization) -> Vec<(String, u32)> {
        f.factors.iter().map(|(g, k)| (g.to_string(), *k)).collect()
    }

    #[test]
    fn x4_minus_1() {
        let f = univariate_factor(&p("x^4-1")).unwrap();
        assert_eq!(
            strs(&f),
            vec![("x - 1".into(), 1), ("x + 1".into(), 1), ("x^2 + 1".into(), 1)]
        );
        assert_eq!(f.expand(), p("x^4-1"));
    }

    #[test]
    fn golden_quadratic_irreducible() {
        let f = univariate_factor(&p("x^2-x-1")).unwrap();
        assert_eq!(strs(&f), vec![("x^2 - x - 1".into(), 1)]);
    }

    #[test]
    fn content_split() {
        let f = univariate_factor(&p("2*x^3+2*x^2+2*x+2")).unwrap();
        assert_eq!(f.content, Rat::from_integer(2.into()));
        assert_eq!(strs(&f), vec![("x + 1".into(), 1), ("x^2 + 1".into(), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime
        let f = univariate_factor(&p("x^4-10*x^2+1")).unwrap();
        assert_eq!(f.factors.len(), 1);
        let g = univariate_factor(&p("(x^4-10*x^2+1)*(x^3-2)*(3*x+1)^2*x^3")).unwrap();
        assert_eq!(g.factors.len(), 4);
        assert_eq!(g.expand(), p("(x^4-10*x^2+1)*(x^3-2)*(3*x+1)^2*x^3"));
    }

    #[test]
    fn errors() {
        assert!(matches!(univariate_factor(&p("x*y+1")), Err(Error::NotUnivariate(_))));
        assert!(matches!(univariate_factor(&p("x^65+1")), Err(Error::DegreeCap { .. })));
    }
}
