use charvar_core::k2::{
    edge_places, star_product, symbol_normalize, symbol_order_candidate, tame_symbol, temperedness, FormalSymbol,
    Place,
};
use charvar_core::poly::{parse_poly, Mat2, RatFn};
use charvar_core::repvar::{eigen_curve, rep_family, EigenCurve, TwoBridgeCode};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(s: &str) -> RatFn {
    RatFn::from_poly(parse_poly(s).unwrap())
}

fn synthetic(poly: &str) -> EigenCurve {
    EigenCurve {
        link: "synthetic".into(),
        code: None,
        component: 1,
        poly: poly.parse().unwrap(),
        slice_signs: vec![],
        epsilon: 1,
        basepoint: None,
    }
}

fn two_bridge(p: u32, q: u32, i: usize, s: &[i8]) -> EigenCurve {
    eigen_curve(&rep_family(&TwoBridgeCode::new(p, q).unwrap()).unwrap(), i, s).unwrap()
}

#[test]
fn geometric_curves_are_tempered() {
    let f8 = temperedness(&two_bridge(5, 3, 1, &[])).unwrap();
    assert!(f8.tempered, "{f8}");
    assert!(f8.edges.iter().all(|e| e.cyclotomic_indices == vec![(1, 1)]));
    for i in [1, 2] {
        let c = temperedness(&two_bridge(8, 3, i, &[1])).unwrap();
        assert!(c.tempered, "{c}");
    }
    let bad = temperedness(&synthetic("l - 2*m")).unwrap();
    assert!(!bad.tempered);
    assert!(bad.edges.iter().any(|e| e.failure_factor.is_some()));
}

#[test]
fn order_candidates() {
    assert_eq!(symbol_order_candidate(&synthetic("l*m^2 - 1")).unwrap().order, 1);
    let six = symbol_order_candidate(&synthetic("1 - l*m^2 + l^2*m^4 + m")).unwrap();
    assert_eq!(six.order % 6, 0, "{six:?}");
    let f8 = symbol_order_candidate(&two_bridge(5, 3, 1, &[])).unwrap();
    assert!(f8.order <= 2, "{f8:?}");
    assert_eq!(symbol_order_candidate(&synthetic("l - 2*m")).unwrap_err().class(), "untempered");
}

#[test]
fn edge_tame_symbols_of_tempered_curves_are_roots_of_unity() {
    let s = FormalSymbol::curve_symbol(1);
    for c in [two_bridge(5, 3, 1, &[]), two_bridge(8, 3, 2, &[-1])] {
        for p in edge_places(&c).unwrap() {
            let v = tame_symbol(&s, &p).unwrap();
            assert!(v.exact && v.is_root_of_unity(), "{} at {}", v, p.label());
        }
    }
}

#[test]
fn tame_symbol_at_a_smooth_torus_point_is_trivial() {
    // l, m are units at a finite point of the torus
    let c = two_bridge(5, 3, 1, &[]);
    let m0 = Complex64::new(1.3, 0.2);
    let coeffs: Vec<Complex64> = c.poly.coeffs_in("l").iter().map(|p| p.eval_complex(&[("m", m0)])).collect();
    let l0 = charvar_core::numeric::poly_roots(&coeffs)[0];
    let p = Place::curve_point(&c, l0, m0).unwrap();
    let v = tame_symbol(&FormalSymbol::curve_symbol(1), &p).unwrap();
    assert!((v.value() - 1.0).norm() < 1e-9, "{v}");
}

#[test]
fn star_product_of_trace_two_and_diagonal_matrices() {
    let n = |t: &str, s: &str| Mat2::new(r(s), r(t), r("0"), r(s));
    // both unipotent
    let x = star_product(&n("t", "1"), &n("u", "1")).unwrap();
    assert!(x.is_identity() && !x.torsion_flag);
    // −unipotent against unipotent, and both −unipotent
    for (a, b) in [(n("t", "-1"), n("u", "1")), (n("t", "-1"), n("u", "-1")), (n("t", "1"), n("u", "-1"))] {
        let x = star_product(&a, &b).unwrap();
        assert!(x.is_identity() && x.torsion_flag);
    }
    // diagonal: {u, v}²
    let d = |f: &str| Mat2::diag(r(f), r(f).recip());
    let x = star_product(&d("u"), &d("v")).unwrap();
    assert_eq!(x, symbol_normalize(&FormalSymbol::power(r("u"), r("v"), 2)));
    assert_eq!(x.to_string(), "{u, v}^2");
}

fn random_conjugator(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let mut e = || {
            let a: i64 = rng.gen_range(-3..=3);
            let b: i64 = rng.gen_range(-2..=2);
            r(&format!("{a} + {b}*x"))
        };
        let p = Mat2::new(e(), e(), e(), e());
        if !p.det().is_zero() {
            return p;
        }
    }
}

#[test]
fn star_product_is_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let d = |f: RatFn| Mat2::diag(f.clone(), f.recip());
    let u = d(r("x + 1"));
    let v = d(r("x^2 - 3"));
    let base = star_product(&u, &v).unwrap();
    for _ in 0..50 {
        let p = random_conjugator(&mut rng);
        let pi = p.inverse().unwrap();
        let cu = &(&p * &u) * &pi;
        let cv = &(&p * &v) * &pi;
        assert_eq!(star_product(&cu, &cv).unwrap(), base);
    }
}

#[test]
fn star_product_is_bimultiplicative() {
    let d = |f: &str| Mat2::diag(r(f), r(f).recip());
    let (u1, u2, v) = (d("x"), d("x + 2"), d("y - 1"));
    let lhs = star_product(&(&u1 * &u2), &v).unwrap();
    let rhs = symbol_normalize(&star_product(&u1, &v).unwrap().mul(&star_product(&u2, &v).unwrap()));
    assert_eq!(lhs, rhs);
}

fn atom() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x", "y", "x + 1", "y - 2", "x*y + 1", "2", "3*x", "-x", "x^2 + 1"])
        .prop_map(String::from)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn skew_symmetry(f in atom(), g in atom(), e in -3i64..=3) {
        let s = FormalSymbol::power(r(&f), r(&g), e).mul(&FormalSymbol::power(r(&g), r(&f), e));
        prop_assert!(symbol_normalize(&s).is_identity());
    }

    // second slot in an independent variable, so no Steinberg relation links the two sides
    #[test]
    fn bimultiplicative_in_first_slot(
        f1 in atom(),
        f2 in atom(),
        g in prop::sample::select(vec!["z", "z + 3", "2*z^2 + 1", "-5*z"]),
    ) {
        let prod = FormalSymbol::pair(&r(&f1) * &r(&f2), r(g));
        let split = FormalSymbol::pair(r(&f1), r(g)).mul(&FormalSymbol::pair(r(&f2), r(g)));
        prop_assert_eq!(symbol_normalize(&prod), symbol_normalize(&split));
    }

    #[test]
    fn steinberg(f in atom(), k in 1i64..4) {
        let f = r(&f);
        let s = FormalSymbol::power(f.clone(), &RatFn::one() - &f, k);
        prop_assert!(symbol_normalize(&s).is_identity());
    }

    #[test]
    fn normalize_is_idempotent(f in atom(), g in atom(), h in atom(), e in -2i64..=2) {
        let s = FormalSymbol::power(&r(&f) * &r(&h), r(&g), e).mul(&FormalSymbol::pair(r(&g), r(&h)));
        let n = symbol_normalize(&s);
        prop_assert_eq!(symbol_normalize(&n), n);
    }

    #[test]
    fn tame_symbol_is_multiplicative(f in atom(), g in atom(), h in atom(), a in -2.0f64..2.0) {
        let place = Place::line_point("x", Some((a * 8.0).round() / 8.0));
        let s1 = FormalSymbol::pair(r(&f), r(&g));
        let s2 = FormalSymbol::pair(r(&h), r(&f));
        let t1 = tame_symbol(&s1, &place);
        let t2 = tame_symbol(&s2, &place);
        let t12 = tame_symbol(&s1.mul(&s2), &place);
        if let (Ok(t1), Ok(t2), Ok(t12)) = (t1, t2, t12) {
            prop_assert!((t12.value() - t1.value() * t2.value()).norm() < 1e-9 * (1.0 + t12.value().norm()));
        }
    }
}
