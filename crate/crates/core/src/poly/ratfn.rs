use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::{MultiPoly, Rat};

/// Reduced quotient of polynomials. The denominator is primitive over Z with
/// positive leading coefficient, so equal functions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn { num, den: MultiPoly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let dp = den.primitive_integer();
        let s = den.leading_coeff() / dp.leading_coeff();
        RatFn { num: num.scale(&s.recip()), den: dp }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFn { num: p, den: MultiPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(c))
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn var(v: &str) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        match (self.num.constant_value(), self.den.constant_value()) {
            (Some(a), Some(b)) => Some(a / b),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn recip(&self) -> Self {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, n: i32) -> Self {
        let base = if n < 0 { self.recip() } else { self.clone() };
        RatFn { num: base.num.pow(n.unsigned_abs()), den: base.den.pow(n.unsigned_abs()) }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut v: Vec<String> = self.num.vars().iter().chain(self.den.vars()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn derivative(&self, v: &str) -> RatFn {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        RatFn::new(n, &self.den * &self.den)
    }

    pub fn eval_complex(&self, bindings: &[(&str, Complex64)]) -> Complex64 {
        self.num.eval_complex(bindings) / self.den.eval_complex(bindings)
    }

    /// Substitute a rational value for a variable.
    pub fn eval(&self, v: &str, val: &Rat) -> RatFn {
        RatFn::new(self.num.eval(v, val), self.den.eval(v, val))
    }

    pub fn sqrt(&self) -> Option<RatFn> {
        // sqrt(n/d) = sqrt(n·d)/d
        let r = (&self.num * &self.den).sqrt()?;
        Some(RatFn::new(r, self.den.clone()))
    }
}

impl Zero for RatFn {
    fn zero() -> Self {
        RatFn::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFn {
    fn one() -> Self {
        RatFn::one()
    }
}

fn add(a: &RatFn, b: &RatFn, sub: bool) -> RatFn {
    let rhs = if sub { -&b.num } else { b.num.clone() };
    if a.den == b.den {
        return RatFn::new(&a.num + &rhs, a.den.clone());
    }
    RatFn::new(&(&a.num * &b.den) + &(&rhs * &a.den), &a.den * &b.den)
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, o: &RatFn) -> RatFn {
        add(self, o, false)
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, o: &RatFn) -> RatFn {
        add(self, o, true)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, o: &RatFn) -> RatFn {
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFn {
    type Output = RatFn;
    fn div(self, o: &RatFn) -> RatFn {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFn::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $f(self, o: RatFn) -> RatFn {
                (&self).$f(&o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);
owned!(Div, div);

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
