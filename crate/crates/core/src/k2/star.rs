use super::symbol::{symbol_normalize, FormalSymbol};
use crate::error::{Error, Result};
use crate::poly::{Mat2, RatFn};

/// U ★ V for commuting matrices of determinant one.
///
/// A trace ±2 on either side gives the identity (flagged as discarded
/// 2-torsion unless both traces are +2). Otherwise U is diagonalised over the
/// field when its eigenvalues lie there, and the result is {u, v}² for the
/// eigenvalues u, v of U, V on a common eigenvector.
pub fn star_product(u_mat: &Mat2, v_mat: &Mat2) -> Result<FormalSymbol> {
    for (name, m) in [("U", u_mat), ("V", v_mat)] {
        let d = m.det();
        if !d.is_one() {
            return Err(Error::NotSpecialLinear(format!("det {name} = {d}")));
        }
    }
    if !u_mat.commutes_with(v_mat) {
        return Err(Error::NonCommuting);
    }
    let two = RatFn::from_int(2);
    let neg_two = RatFn::from_int(-2);
    let (tu, tv) = (u_mat.trace(), v_mat.trace());
    let special = |t: &RatFn| *t == two || *t == neg_two;
    if special(&tu) || special(&tv) {
        let mut s = FormalSymbol::identity();
        s.torsion_flag = !(tu == two && tv == two);
        return Ok(s);
    }
    let disc = &(&tu * &tu) - &RatFn::from_int(4);
    let root = disc
        .sqrt()
        .ok_or_else(|| Error::NotHandled(format!("eigenvalues of U need sqrt({disc})")))?;
    let u = &(&tu + &root) / &two;
    let (a, b, c, d) = (u_mat.get(0, 0), u_mat.get(0, 1), u_mat.get(1, 0), u_mat.get(1, 1));
    // eigenvector of U for u
    let e = if !b.is_zero() {
        [b.clone(), &u - a]
    } else if !c.is_zero() {
        [&u - d, c.clone()]
    } else if *a == u {
        [RatFn::one(), RatFn::zero()]
    } else {
        [RatFn::zero(), RatFn::one()]
    };
    let k = if e[0].is_zero() { 1 } else { 0 };
    let ve = &(v_mat.get(k, 0) * &e[0]) + &(v_mat.get(k, 1) * &e[1]);
    let v = &ve / &e[k];
    Ok(symbol_normalize(&FormalSymbol::power(u, v, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn r(s: &str) -> RatFn {
        RatFn::from_poly(parse_poly(s).unwrap())
    }

    fn diag(s: &str) -> Mat2 {
        Mat2::diag(r(s), r(s).recip())
    }

    #[test]
    fn diagonal() {
        let s = star_product(&diag("x"), &diag("y")).unwrap();
        assert_eq!(s, symbol_normalize(&FormalSymbol::power(r("x"), r("y"), 2)));
        assert!(!s.torsion_flag);
    }

    #[test]
    fn unipotent_and_torsion() {
        let n1 = Mat2::new(r("1"), r("t"), r("0"), r("1"));
        let n2 = Mat2::new(r("1"), r("u"), r("0"), r("1"));
        let s = star_product(&n1, &n2).unwrap();
        assert!(s.is_identity() && !s.torsion_flag);
        let m1 = Mat2::new(r("-1"), r("t"), r("0"), r("-1"));
        let s = star_product(&m1, &n2).unwrap();
        assert!(s.is_identity() && s.torsion_flag);
    }

    #[test]
    fn errors() {
        let a = Mat2::new(r("1"), r("1"), r("0"), r("1"));
        let b = Mat2::new(r("1"), r("0"), r("1"), r("1"));
        assert_eq!(star_product(&a, &b), Err(Error::NonCommuting));
        let c = Mat2::diag(r("2"), r("1"));
        assert!(matches!(star_product(&c, &c), Err(Error::NotSpecialLinear(_))));
        // trace x with eigenvalues outside Q(x)
        let d = Mat2::new(r("0"), r("1"), r("-1"), r("x"));
        assert!(matches!(star_product(&d, &d), Err(Error::NotHandled(_))));
    }
}
