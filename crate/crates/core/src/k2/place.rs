use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::symbol::FormalSymbol;
use crate::error::{Error, Result};
use crate::numeric::poly_roots;
use crate::poly::{
    cyclotomic_index, edge_polynomial_in, newton_polygon_in, rat, rat_to_f64, univariate_factor, Edge, Lattice,
    MultiPoly, Rat, RatFn,
};
use crate::repvar::{EigenCurve, L, M};

/// Truncated Laurent series Σ c_k t^{val + k}.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    pub val: i64,
    pub coeffs: Vec<Complex64>,
}

pub const SERIES_TERMS: usize = 24;
const NEGLIGIBLE: f64 = 1e-12;

impl LaurentSeries {
    pub fn new(val: i64, coeffs: Vec<Complex64>) -> Self {
        let mut s = LaurentSeries { val, coeffs };
        s.coeffs.resize(SERIES_TERMS, Complex64::zero());
        s
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    /// c₀ + t.
    pub fn shifted_parameter(c: Complex64) -> Self {
        Self::new(0, vec![c, Complex64::one()])
    }

    /// 1/t.
    pub fn inverse_parameter() -> Self {
        Self::new(-1, vec![Complex64::one()])
    }

    fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop leading coefficients that vanish to working precision.
    fn normalized(mut self) -> Self {
        let s = self.scale();
        let k = self.coeffs.iter().position(|c| c.norm() > NEGLIGIBLE * s.max(1.0));
        match k {
            Some(k) if k > 0 => {
                self.coeffs.drain(..k);
                self.val += k as i64;
                self.coeffs.resize(SERIES_TERMS, Complex64::zero());
            }
            Some(_) => {}
            None => {
                self.coeffs.iter_mut().for_each(|c| *c = Complex64::zero());
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut c = vec![Complex64::zero(); SERIES_TERMS];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate().take(SERIES_TERMS - i) {
                c[i + j] += a * b;
            }
        }
        Self::new(self.val + o.val, c).normalized()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let v = self.val.min(o.val);
        let mut c = vec![Complex64::zero(); SERIES_TERMS];
        for (s, shift) in [(self, self.val - v), (o, o.val - v)] {
            for (k, x) in s.coeffs.iter().enumerate() {
                let i = k + shift as usize;
                if i < SERIES_TERMS {
                    c[i] += x;
                }
            }
        }
        Self::new(v, c).normalized()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Indeterminate("inverse of a vanishing series".into()));
        }
        let a0 = self.coeffs[0];
        let mut b = vec![Complex64::zero(); SERIES_TERMS];
        b[0] = 1.0 / a0;
        for n in 1..SERIES_TERMS {
            let s: Complex64 = (1..=n).map(|k| self.coeffs[k] * b[n - k]).sum();
            b[n] = -s / a0;
        }
        Ok(Self::new(-self.val, b))
    }

    pub fn powi(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::constant(Complex64::one());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn eval_poly(p: &MultiPoly, coords: &[(String, LaurentSeries)]) -> Result<Self> {
        let mut acc = Self::constant(Complex64::zero());
        for (exps, c) in p.terms() {
            let mut t = Self::constant(Complex64::new(rat_to_f64(c), 0.0));
            for (v, &k) in p.vars().iter().zip(exps) {
                if k == 0 {
                    continue;
                }
                let s = coords
                    .iter()
                    .find(|(n, _)| n == v)
                    .ok_or_else(|| Error::Indeterminate(format!("variable {v} has no expansion at this place")))?;
                t = t.mul(&s.1.powi(k as i64)?);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    pub fn eval(f: &RatFn, coords: &[(String, LaurentSeries)]) -> Result<Self> {
        let n = Self::eval_poly(f.num(), coords)?;
        let d = Self::eval_poly(f.den(), coords)?;
        if d.is_zero() {
            return Err(Error::Indeterminate(format!("denominator of {f} vanishes identically")));
        }
        Ok(n.mul(&d.inv()?))
    }
}

/// Root of an edge polynomial: exactly e^{2πik/n} for cyclotomic factors,
/// numeric otherwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum EdgeRoot {
    Cyclotomic { n: u64, k: u64 },
    Numeric { re: f64, im: f64 },
}

impl std::fmt::Display for EdgeRoot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EdgeRoot::Cyclotomic { n, k } => write!(f, "exp(2πi·{k}/{n})"),
            EdgeRoot::Numeric { re, im } => write!(f, "{re} + {im}i"),
        }
    }
}

impl EdgeRoot {
    pub fn value(&self) -> Complex64 {
        match self {
            EdgeRoot::Cyclotomic { n, k } => Complex64::from_polar(1.0, 2.0 * PI * *k as f64 / *n as f64),
            EdgeRoot::Numeric { re, im } => Complex64::new(*re, *im),
        }
    }

    fn turn(&self) -> Option<Rat> {
        match self {
            EdgeRoot::Cyclotomic { n, k } => Some(rat(*k as i64, *n as i64)),
            EdgeRoot::Numeric { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    /// A point given by Laurent expansions of the coordinate functions in a
    /// local parameter.
    Series { label: String, coords: Vec<(String, LaurentSeries)> },
    /// Ideal point attached to a Newton-polygon edge: v(l), v(m) is the inner
    /// normal and the initial coefficients satisfy l^{d₁} m^{d₂} → root.
    Edge { edge: Edge, normal: Lattice, root: EdgeRoot, multiplicity: u32 },
}

impl Place {
    /// z = a on the affine line (a = None for the point at infinity).
    pub fn line_point(var: &str, a: Option<f64>) -> Place {
        let (label, s) = match a {
            Some(a) => (format!("{var} = {a}"), LaurentSeries::shifted_parameter(Complex64::new(a, 0.0))),
            None => (format!("{var} = ∞"), LaurentSeries::inverse_parameter()),
        };
        Place::Series { label, coords: vec![(var.to_string(), s)] }
    }

    /// Smooth point (l₀, m₀) of the curve with local parameter m − m₀, or
    /// l − l₀ when ∂A/∂l vanishes there.
    pub fn curve_point(curve: &EigenCurve, l0: Complex64, m0: Complex64) -> Result<Place> {
        let bind = [(L, l0), (M, m0)];
        let al = curve.poly.derivative(L).eval_complex(&bind);
        let am = curve.poly.derivative(M).eval_complex(&bind);
        let (free, dep, x0, y0) = if al.norm() >= am.norm() { (M, L, m0, l0) } else { (L, M, l0, m0) };
        let dpoly = curve.poly.derivative(dep);
        if dpoly.eval_complex(&bind).norm() < 1e-10 {
            return Err(Error::Indeterminate(format!("singular curve point ({l0}, {m0})")));
        }
        let xs = LaurentSeries::shifted_parameter(x0);
        let mut ys = LaurentSeries::constant(y0);
        // Newton iteration on power series; each step doubles the precision
        for _ in 0..6 {
            let coords = vec![(free.to_string(), xs.clone()), (dep.to_string(), ys.clone())];
            let f = LaurentSeries::eval_poly(&curve.poly, &coords)?;
            if f.is_zero() {
                break;
            }
            let df = LaurentSeries::eval_poly(&dpoly, &coords)?;
            let step = f.mul(&df.inv()?);
            ys = ys.add(&step.mul(&LaurentSeries::constant(-Complex64::one())));
        }
        Ok(Place::Series {
            label: format!("({l0}, {m0})"),
            coords: vec![(free.to_string(), xs), (dep.to_string(), ys)],
        })
    }

    pub fn label(&self) -> String {
        match self {
            Place::Series { label, .. } => label.clone(),
            Place::Edge { edge, root, .. } => format!("edge {edge} root {root}"),
        }
    }
}

/// Tame symbol value. `turn` is set when the value is known exactly to be
/// e^{2πi·turn}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TameValue {
    pub re: f64,
    pub im: f64,
    pub turn: Option<String>,
    /// Order of the value as a root of unity, if it is one.
    pub order: Option<u64>,
    /// True when the root-of-unity decision is exact rather than numerical.
    pub exact: bool,
}

impl TameValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn from_turn(t: Rat) -> TameValue {
        let t = &t - t.floor();
        let z = Complex64::from_polar(1.0, 2.0 * PI * rat_to_f64(&t));
        TameValue {
            re: z.re,
            im: z.im,
            order: t.denom().to_u64(),
            turn: Some(t.to_string()),
            exact: true,
        }
    }

    fn from_numeric(z: Complex64) -> TameValue {
        let mut out = TameValue { re: z.re, im: z.im, turn: None, order: None, exact: false };
        if (z.norm() - 1.0).abs() < 1e-10 {
            let x = z.arg() / (2.0 * PI);
            if let Some((p, q)) = best_rational(x, 1000) {
                if (x - p as f64 / q as f64).abs() < 1e-10 {
                    let t = rat(p, q);
                    let t = &t - t.floor();
                    out.order = t.denom().to_u64();
                    out.turn = Some(t.to_string());
                }
            }
        }
        out
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.order.is_some()
    }
}

impl fmt::Display for TameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.turn, self.order) {
            (Some(t), Some(n)) => write!(f, "exp(2πi·{t}) (order {n}{})", if self.exact { "" } else { ", numerical" }),
            _ => write!(f, "{} + {}i", self.re, self.im),
        }
    }
}

/// Closest fraction p/q with q ≤ qmax, by continued fractions.
pub fn best_rational(x: f64, qmax: i64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    let mut best = None;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (p2, q2) = (a.checked_mul(p1)?.checked_add(p0)?, a.checked_mul(q1)?.checked_add(q0)?);
        if q2 > qmax {
            break;
        }
        best = Some((p2, q2));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    best
}

/// Exponents (i, j) and rational coefficient of a monomial c·l^i·m^j.
fn monomial_data(f: &RatFn) -> Option<(Rat, i64, i64)> {
    let part = |p: &MultiPoly| -> Option<(Rat, i64, i64)> {
        if !p.is_monomial() || p.vars().iter().any(|v| v != L && v != M) {
            return None;
        }
        let (e, c) = p.terms().next()?;
        Some((c.clone(), p.exponent_of(e, L) as i64, p.exponent_of(e, M) as i64))
    };
    let (cn, i1, j1) = part(f.num())?;
    let (cd, i2, j2) = part(f.den())?;
    Some((cn / cd, i1 - i2, j1 - j2))
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.x, -e.y)
    } else {
        (e.x, e.y)
    }
}

/// Tame symbol (−1)^{v(f)v(g)} f^{v(g)}/g^{v(f)} at the place, multiplied over
/// the factors of the symbol with their exponents.
pub fn tame_symbol(s: &FormalSymbol, v: &Place) -> Result<TameValue> {
    match v {
        Place::Series { coords, label } => {
            let mut acc = Complex64::one();
            for sf in &s.factors {
                let f = LaurentSeries::eval(&sf.f, coords)?;
                let g = LaurentSeries::eval(&sf.g, coords)?;
                if f.is_zero() || g.is_zero() {
                    return Err(Error::Indeterminate(format!("entry vanishes identically at {label}")));
                }
                let (vf, vg) = (f.valuation(), g.valuation());
                let sign = if (vf * vg) % 2 == 0 { 1.0 } else { -1.0 };
                let t = sign * f.leading().powi(vg as i32) / g.leading().powi(vf as i32);
                acc *= t.powi(sf.e as i32);
            }
            Ok(TameValue::from_numeric(acc))
        }
        Place::Edge { edge, normal, root, .. } => {
            let (a, b) = *normal;
            let (x, y) = extended_gcd(edge.direction.0, edge.direction.1);
            // initial coefficients l ~ s^x, m ~ s^y
            let mut turn = Rat::zero();
            let mut numeric = Complex64::one();
            let mut exact = root.turn().is_some();
            for sf in &s.factors {
                let (cf, i_f, j_f) = monomial_data(&sf.f)
                    .ok_or_else(|| Error::Indeterminate(format!("{} is not a monomial in l, m", sf.f)))?;
                let (cg, i_g, j_g) = monomial_data(&sf.g)
                    .ok_or_else(|| Error::Indeterminate(format!("{} is not a monomial in l, m", sf.g)))?;
                let vf = a * i_f + b * j_f;
                let vg = a * i_g + b * j_g;
                let s_pow = (x * i_f + y * j_f) * vg - (x * i_g + y * j_g) * vf;
                let sign_half = (vf * vg).rem_euclid(2);
                // rational constants: c_f^{vg} / c_g^{vf}
                let c = pow_rat(&cf, vg) / pow_rat(&cg, vf);
                let c_abs_one = c.abs().is_one();
                let sign_c = if c.is_negative() { 1 } else { 0 };
                match root.turn() {
                    Some(r) if c_abs_one => {
                        let part = &r * Rat::from_integer(s_pow.into()) + rat(sign_half + sign_c, 2);
                        turn += part * Rat::from_integer(sf.e.into());
                    }
                    _ => {
                        exact = false;
                        let z = root.value().powi(s_pow as i32)
                            * rat_to_f64(&c)
                            * if sign_half == 1 { -1.0 } else { 1.0 };
                        numeric *= z.powi(sf.e as i32);
                    }
                }
            }
            if exact {
                Ok(TameValue::from_turn(turn))
            } else {
                let z = numeric * Complex64::from_polar(1.0, 2.0 * PI * rat_to_f64(&turn));
                Ok(TameValue::from_numeric(z))
            }
        }
    }
}

fn pow_rat(c: &Rat, k: i64) -> Rat {
    if k >= 0 {
        num_traits::pow(c.clone(), k as usize)
    } else {
        num_traits::pow(c.recip(), (-k) as usize)
    }
}

/// One place per root of every Newton-polygon edge polynomial of the curve.
pub fn edge_places(curve: &EigenCurve) -> Result<Vec<Place>> {
    let np = newton_polygon_in(&curve.poly, Some([L, M]))?;
    let mut out = Vec::new();
    for edge in &np.edges {
        let ep = edge_polynomial_in(&curve.poly, edge, Some([L, M]))?;
        if ep.is_constant() {
            continue;
        }
        let fac = univariate_factor(&ep)?;
        for (f, mult) in &fac.factors {
            if f.is_monomial() {
                continue;
            }
            match cyclotomic_index(f) {
                Some(n) => {
                    for k in (0..n).filter(|k| k.gcd(&n) == 1) {
                        out.push(Place::Edge {
                            edge: edge.clone(),
                            normal: edge.inner_normal(),
                            root: EdgeRoot::Cyclotomic { n, k },
                            multiplicity: *mult,
                        });
                    }
                }
                None => {
                    let var = f.vars()[0].clone();
                    let coeffs: Vec<Complex64> = f
                        .coeffs_in(&var)
                        .iter()
                        .map(|c| Complex64::new(rat_to_f64(&c.constant_value().unwrap_or_default()), 0.0))
                        .collect();
                    for z in poly_roots(&coeffs) {
                        out.push(Place::Edge {
                            edge: edge.clone(),
                            normal: edge.inner_normal(),
                            root: EdgeRoot::Numeric { re: z.re, im: z.im },
                            multiplicity: *mult,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}
