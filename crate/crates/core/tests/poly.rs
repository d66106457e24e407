use charvar_core::poly::*;
use proptest::prelude::*;

fn p(s: &str) -> MultiPoly {
    parse_poly(s).unwrap()
}

fn small_poly(var: &'static str) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(-4i64..=4, 1..4).prop_filter_map("nonzero", move |cs| {
        let s = cs.iter().enumerate().map(|(k, c)| format!("({c})*{var}^{k}")).collect::<Vec<_>>().join(" + ");
        let q = p(&s);
        (!q.is_zero()).then_some(q)
    })
}

fn bivariate() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..3), (0u32..3), -3i64..=3), 1..5).prop_filter_map("nonzero", |ts| {
        let s = ts.iter().map(|(i, j, c)| format!("({c})*x^{i}*y^{j}")).collect::<Vec<_>>().join(" + ");
        let q = p(&s);
        (!q.is_zero()).then_some(q)
    })
}

#[test]
fn cyclotomic_factorization_of_binomials() {
    for n in 1..=24u64 {
        let c = is_cyclotomic_product(&p(&format!("x^{n} - 1"))).unwrap();
        assert!(c.is_cyclotomic);
        let mut idx: Vec<u64> = c.indices.iter().map(|(k, _)| *k).collect();
        idx.sort();
        let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        assert_eq!(idx, divisors, "x^{n} - 1");
        let deg: u64 = divisors.iter().map(|d| totient(*d)).sum();
        assert_eq!(deg, n);
    }
    assert!(!is_cyclotomic_product(&p("x^2 - 3*x + 1")).unwrap().is_cyclotomic);
}

#[test]
fn resultant_eliminates() {
    // Res_x(x − y², x² − 2) = y⁴ − 2
    assert_eq!(resultant(&p("x - y^2"), &p("x^2 - 2"), "x").unwrap(), p("y^4 - 2"));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]

    #[test]
    fn resultant_vanishes_on_a_shared_factor(a in small_poly("x"), b in small_poly("x"), c in -3i64..=3) {
        let r = p(&format!("x - ({c})*y"));
        prop_assume!(a.degree_in("x") + b.degree_in("x") > 0);
        let res = resultant(&(&a * &r), &(&b * &r), "x").unwrap();
        prop_assert!(res.is_zero());
    }

    #[test]
    fn resultant_of_a_linear_factor_is_evaluation(b in small_poly("x"), c in -3i64..=3) {
        prop_assume!(b.degree_in("x") > 0);
        let res = resultant(&p(&format!("x - ({c})")), &b, "x").unwrap();
        prop_assert_eq!(res, b.eval("x", &rat(c, 1)));
    }

    #[test]
    fn factorization_reassembles(f in small_poly("x"), g in small_poly("x"), h in small_poly("x")) {
        let q = &(&f * &g) * &h;
        let fac = univariate_factor(&q).unwrap();
        prop_assert_eq!(fac.expand(), q);
        for (factor, _) in &fac.factors {
            prop_assert!(univariate_factor(factor).unwrap().factors.len() == 1);
        }
    }

    #[test]
    fn gcd_divides_and_squarefree_part_divides(f in bivariate(), g in bivariate(), h in bivariate()) {
        let (a, b) = (&f * &h, &g * &h);
        let d = gcd(&a, &b);
        prop_assert!(a.div_exact(&d).is_some() && b.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&h.primitive_integer()).is_some() || h.is_constant());
        let sq = &f * &f;
        let s = squarefree_part(&sq);
        prop_assert!(sq.div_exact(&s).is_some());
    }

    #[test]
    fn newton_polygon_contains_support(f in bivariate()) {
        prop_assume!(f.num_terms() >= 3);
        let np = newton_polygon_in(&f, Some(["x", "y"])).unwrap();
        for q in &np.support {
            prop_assert!(np.contains(*q));
        }
        for v in &np.vertices {
            prop_assert!(np.support.contains(v));
        }
        let hull = convex_hull(&np.support);
        prop_assert_eq!(hull.len(), np.vertices.len());
    }

    #[test]
    fn display_round_trips(f in bivariate()) {
        prop_assert_eq!(p(&f.to_string()), f);
    }
}
