//! Acceptance suite: one PASS/FAIL line per criterion, with wall time against
//! its budget. Run with `cargo test -p charvar-cli --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use charvar_core::k2::{star_product, symbol_normalize, temperedness, FormalSymbol};
use charvar_core::oracle::{bloch_wigner, gluing_residual, lobachevsky, solve_gluing, Triangulation};
use charvar_core::poly::{parse_poly, Mat2, RatFn};
use charvar_core::regulator::*;
use charvar_core::repvar::{eigen_curve, presentation, rep_family, riley_polynomial, EigenCurve, Gen, TwoBridgeCode, Word, U};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn two_bridge(p: u32, q: u32, i: usize, s: &[i8]) -> EigenCurve {
    eigen_curve(&rep_family(&TwoBridgeCode::new(p, q).unwrap()).unwrap(), i, s).unwrap()
}

fn run(n: u32, name: &str, budget: Duration, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let res = f();
    let dt = t.elapsed();
    let (ok, detail) = match res {
        Ok(d) if dt <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget")),
        Err(e) => (false, e),
    };
    println!(
        "{} {n}. {name}: {detail} [{:.2}s / {}s]",
        if ok { "PASS" } else { "FAIL" },
        dt.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

// ---- 1. independent representation oracle -------------------------------

type M2 = [[Complex64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn eval_word(w: &Word, ma: Complex64, mb: Complex64, u: Complex64) -> M2 {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    let a = [[ma, o], [z, o / ma]];
    let ai = [[o / ma, -o], [z, ma]];
    let b = [[mb, z], [u, o / mb]];
    let bi = [[o / mb, z], [-u, mb]];
    w.0.iter().fold([[o, z], [z, o]], |acc, &(g, e)| {
        let x = match (g, e > 0) {
            (Gen::A, true) => &a,
            (Gen::A, false) => &ai,
            (Gen::B, true) => &b,
            (Gen::B, false) => &bi,
        };
        mul(&acc, x)
    })
}

/// Durand–Kerner roots of the Riley polynomial in u.
fn riley_roots(riley: &charvar_core::poly::MultiPoly, bind: &[(&str, Complex64)]) -> Vec<Complex64> {
    let k: Vec<Complex64> = riley.coeffs_in(U).iter().map(|p| p.eval_complex(bind)).collect();
    let n = k.len() - 1;
    let mut z: Vec<Complex64> = (0..n).map(|j| c(0.4, 0.9).powu(j as u32 + 1)).collect();
    for _ in 0..2000 {
        for i in 0..n {
            let p = k.iter().rev().fold(c(0.0, 0.0), |acc, x| acc * z[i] + x) / k[n];
            let d: Complex64 = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            z[i] -= p / d;
        }
    }
    z
}

/// Max scaled residual of the eigenvalue curve over 20 irreducible
/// representations solved from the Riley polynomial.
fn soundness(p: u32, q: u32, i: usize, signs: &[i8], seed: u64) -> std::result::Result<f64, String> {
    let code = TwoBridgeCode::new(p, q).unwrap();
    let fam = rep_family(&code).map_err(|e| e.to_string())?;
    let curve = eigen_curve(&fam, i, signs).map_err(|e| e.to_string())?;
    let riley = riley_polynomial(&fam).map_err(|e| e.to_string())?;
    let pres = presentation(&code).unwrap();
    let comm = Word(vec![(Gen::A, 1), (Gen::B, 1), (Gen::A, -1), (Gen::B, -1)]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut seen, mut worst) = (0, 0.0f64);
    while seen < 20 {
        let m = Complex64::from_polar(rng.gen_range(0.6..1.5), rng.gen_range(-3.1..3.1));
        let (ma, mb) = match (code.is_knot(), i) {
            (true, _) => (m, m),
            (false, 1) => (m, c(signs[0] as f64, 0.0)),
            (false, _) => (c(signs[0] as f64, 0.0), m),
        };
        let bind: Vec<(&str, Complex64)> = if code.is_knot() { vec![("m", m)] } else { vec![("m1", ma), ("m2", mb)] };
        for u in riley_roots(&riley, &bind) {
            let k = eval_word(&comm, ma, mb, u);
            if (k[0][0] + k[1][1] - 2.0).norm() < 1e-9 || seen == 20 {
                continue;
            }
            let lam = eval_word(&pres.longitudes[i - 1], ma, mb, u);
            let l = if i == 1 { lam[0][0] } else { c(1.0, 0.0) / lam[1][1] };
            worst = worst.max(curve.residual(l, m));
            seen += 1;
        }
    }
    Ok(worst)
}

fn criterion_1() -> bool {
    let mut all = true;
    for (label, p, q, i, s) in [
        ("figure-eight", 5, 3, 1, vec![]),
        ("Whitehead V1 (m2 = +1)", 8, 3, 1, vec![1]),
        ("Whitehead V2 (m1 = +1)", 8, 3, 2, vec![1]),
    ] {
        all &= run(1, &format!("eigenvariety soundness, {label}"), Duration::from_secs(10), || {
            let r = soundness(p, q, i, &s, 11)?;
            ensure(r < 1e-8, || format!("max |A|/‖A‖ = {r:.2e}"))?;
            Ok(format!("max |A|/‖A‖ = {r:.2e} over 20 representations"))
        });
    }
    all
}

fn criterion_2() -> bool {
    run(2, "temperedness certificates", Duration::from_secs(1), || {
        let mut report = Vec::new();
        for (label, curve) in [
            ("figure-eight", two_bridge(5, 3, 1, &[])),
            ("Whitehead V1", two_bridge(8, 3, 1, &[1])),
            ("Whitehead V2", two_bridge(8, 3, 2, &[1])),
        ] {
            let cert = temperedness(&curve).map_err(|e| e.to_string())?;
            ensure(cert.tempered, || format!("{label} not tempered:\n{cert}"))?;
            report.push(format!("{label} tempered ({} edges)", cert.edges.len()));
        }
        let control = EigenCurve {
            link: "control".into(),
            code: None,
            component: 1,
            poly: "l - 2*m".parse().unwrap(),
            slice_signs: vec![],
            epsilon: 1,
            basepoint: None,
        };
        let cert = temperedness(&control).map_err(|e| e.to_string())?;
        ensure(!cert.tempered, || "l - 2m passed".into())?;
        report.push("l - 2m rejected".into());
        Ok(report.join(", "))
    })
}

fn r(s: &str) -> RatFn {
    RatFn::from_poly(parse_poly(s).unwrap())
}

fn criterion_3() -> bool {
    run(3, "K2 symbol algebra", Duration::from_secs(5), || {
        let atoms = ["x", "y", "x + 1", "y - 2", "x*y + 1", "2", "3*x", "-x", "x^2 + 1"];
        let mut checks = 0;
        for f in atoms {
            for g in atoms {
                let s = FormalSymbol::pair(r(f), r(g)).mul(&FormalSymbol::pair(r(g), r(f)));
                ensure(symbol_normalize(&s).is_identity(), || format!("skew-symmetry fails for {f}, {g}"))?;
                for h in ["z", "z + 3", "2*z^2 + 1"] {
                    let prod = FormalSymbol::pair(&r(f) * &r(g), r(h));
                    let split = FormalSymbol::pair(r(f), r(h)).mul(&FormalSymbol::pair(r(g), r(h)));
                    ensure(symbol_normalize(&prod) == symbol_normalize(&split), || {
                        format!("bimultiplicativity fails for {f}, {g}, {h}")
                    })?;
                    checks += 1;
                }
                checks += 1;
            }
            let fx = r(f);
            if !(&RatFn::one() - &fx).is_zero() {
                let s = FormalSymbol::pair(fx.clone(), &RatFn::one() - &fx);
                ensure(symbol_normalize(&s).is_identity(), || format!("Steinberg fails for {f}"))?;
                checks += 1;
            }
        }
        let n = |t: &str, s: &str| Mat2::new(r(s), r(t), r("0"), r(s));
        let x = star_product(&n("t", "1"), &n("u", "1")).map_err(|e| e.to_string())?;
        ensure(x.is_identity() && !x.torsion_flag, || "unipotent ★ unipotent".into())?;
        for (a, b) in [(n("t", "-1"), n("u", "1")), (n("t", "-1"), n("u", "-1"))] {
            let x = star_product(&a, &b).map_err(|e| e.to_string())?;
            ensure(x.is_identity() && x.torsion_flag, || "−unipotent case".into())?;
        }
        let d = |f: RatFn| Mat2::diag(f.clone(), f.recip());
        let x = star_product(&d(r("u")), &d(r("v"))).map_err(|e| e.to_string())?;
        ensure(x.to_string() == "{u, v}^2", || format!("diag ★ diag = {x}"))?;
        let (u, v) = (d(r("x + 1")), d(r("x^2 - 3")));
        let base = star_product(&u, &v).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut conj = 0;
        while conj < 50 {
            let mut e = || r(&format!("{} + {}*x", rng.gen_range(-3i64..=3), rng.gen_range(-2i64..=2)));
            let p = Mat2::new(e(), e(), e(), e());
            if p.det().is_zero() {
                continue;
            }
            let pi = p.inverse().ok_or("singular conjugator")?;
            let got = star_product(&(&(&p * &u) * &pi), &(&(&p * &v) * &pi)).map_err(|e| e.to_string())?;
            ensure(got == base, || format!("conjugation changes {base} to {got}"))?;
            conj += 1;
        }
        Ok(format!("{checks} symbol identities, ★ cases, 50 conjugators"))
    })
}

// ---- 4–7. regulator -------------------------------------------------------

fn start_at(curve: &EigenCurve, w: Complex64) -> PathState {
    let curves = std::slice::from_ref(curve);
    let states =
        track_path(curves, &PathSpec::exp_segment(c(0.0, 0.0), w, 200), &PathState::at_basepoint(curves).unwrap()).unwrap();
    let mut s = states.last().unwrap().clone();
    s.t = 0.0;
    s.eta_acc = 0.0;
    s.xi_acc = 0.0;
    s
}

fn rectangles() -> Vec<[Complex64; 5]> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..10)
        .map(|_| {
            let mut side = |lo: f64, hi: f64| loop {
                let (a, b): (f64, f64) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
                if a.abs() > 0.05 && b.abs() > 0.05 && (a - b).abs() > 0.1 {
                    return (a.min(b), a.max(b));
                }
            };
            let (x0, x1) = side(-0.4, 0.4);
            let (y0, y1) = side(-0.8, 0.8);
            [c(x0, y0), c(x1, y0), c(x1, y1), c(x0, y1), c(x0, y0)]
        })
        .collect()
}

fn contractible_loops(f8: &EigenCurve) -> std::result::Result<Vec<Vec<PathState>>, String> {
    rectangles()
        .iter()
        .map(|rect| {
            track_path(std::slice::from_ref(f8), &PathSpec::log_polyline(rect, 8000, true), &start_at(f8, rect[0]))
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn circle(f8: &EigenCurve, turns: i32) -> std::result::Result<Vec<PathState>, String> {
    let spec = PathSpec::circle(1.2, turns, 800 * turns as usize);
    track_path(std::slice::from_ref(f8), &spec, &start_at(f8, c(1.2f64.ln(), 0.0))).map_err(|e| e.to_string())
}

fn criterion_4(f8: &EigenCurve) -> bool {
    run(4, "exactness of η on contractible loops", Duration::from_secs(30), || {
        let eps = [f8.epsilon as f64];
        let mut worst = 0.0f64;
        for states in contractible_loops(f8)? {
            worst = worst.max(integrate_eta(&states, &eps).map_err(|e| e.to_string())?.abs());
        }
        ensure(worst < 1e-7, || format!("max |∮η| = {worst:.2e}"))?;
        Ok(format!("max |∮η| = {worst:.2e} over 10 loops"))
    })
}

fn criterion_5(f8: &EigenCurve) -> bool {
    run(5, "flat monodromy", Duration::from_secs(30), || {
        let eps = [f8.epsilon as f64];
        let mut loops = contractible_loops(f8)?;
        loops.push(circle(f8, 1)?);
        let mut worst = 0.0f64;
        for states in &loops {
            let m = monodromy(states, &eps).map_err(|e| e.to_string())?;
            worst = worst.max((m.norm() - 1.0).abs());
        }
        ensure(worst < 1e-8, || format!("max ||M| − 1| = {worst:.2e}"))?;
        Ok(format!("max ||M| − 1| = {worst:.2e} over 10 contractible loops + |m| = 1.2"))
    })
}

fn criterion_6(f8: &EigenCurve) -> bool {
    run(6, "quantization", Duration::from_secs(60), || {
        let eps = [f8.epsilon as f64];
        let once = quantization_check(&circle(f8, 1)?, &eps, None).map_err(|e| e.to_string())?;
        let twice = quantization_check(&circle(f8, 2)?, &eps, None).map_err(|e| e.to_string())?;
        ensure(once.p != 0, || "loop quantizes to 0".into())?;
        ensure(once.residual < 1e-5 && once.q <= 64, || format!("{once:?}"))?;
        ensure(twice.p == 2 * once.p && twice.q == once.q, || format!("{once:?} vs {twice:?}"))?;
        Ok(format!(
            "|m| = 1.2: {}/{} (residual {:.1e}), doubled: {}/{}",
            once.p, once.q, once.residual, twice.p, twice.q
        ))
    })
}

fn criterion_7() -> bool {
    run(7, "volume reproduction", Duration::from_secs(120), || {
        let mut f8 = two_bridge(5, 3, 1, &[]);
        let wh = two_bridge(8, 3, 1, &[1]);
        let v8 = complete_volume(&f8).map_err(|e| e.to_string())?;
        let vw = complete_volume(&wh).map_err(|e| e.to_string())?;
        ensure((v8 - 2.02988321).abs() < 1e-6 && (vw - 3.66386238).abs() < 1e-6, || format!("{v8} {vw}"))?;
        f8.epsilon = calibrate_epsilon(&f8).map_err(|e| e.to_string())?.epsilon;
        let spec = PathSpec::exp_segment(c(0.0, 0.0), c(0.0, 0.05 * PI), 1000);
        let states = track_path(std::slice::from_ref(&f8), &spec, &PathState::at_basepoint(std::slice::from_ref(&f8)).unwrap())
            .map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for k in 1..=10 {
            let s = &states[100 * k];
            let v = v8 + 2.0 * s.eta_acc;
            let oracle = oracle_volume(&f8, s.comps[0].log_m).map_err(|e| e.to_string())?;
            worst = worst.max((v - oracle).abs());
        }
        ensure(worst < 1e-5, || format!("max |V − oracle| = {worst:.2e}"))?;
        Ok(format!(
            "Vol = {v8:.9}, {vw:.9}; ε = {:+}; max |V − oracle| = {worst:.2e} at a = 0.005k",
            f8.epsilon
        ))
    })
}

fn criterion_8() -> bool {
    run(8, "oracle self-consistency", Duration::from_secs(5), || {
        let mut worst = 0.0f64;
        for k in -200..=200 {
            let t = k as f64 * 0.0137;
            worst = worst.max((lobachevsky(-t) + lobachevsky(t)).abs());
            worst = worst.max((lobachevsky(t + PI) - lobachevsky(t)).abs());
            worst = worst.max((lobachevsky(2.0 * t) - 2.0 * lobachevsky(t) - 2.0 * lobachevsky(t + PI / 2.0)).abs());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0));
            let d = bloch_wigner(z).unwrap();
            worst = worst.max((d + bloch_wigner(z.conj()).unwrap()).abs());
            worst = worst.max((d + bloch_wigner(1.0 / z).unwrap()).abs());
            worst = worst.max((d + bloch_wigner(1.0 - z).unwrap()).abs());
        }
        ensure(worst < 1e-11, || format!("identity defect {worst:.2e}"))?;
        let mut glue = 0.0f64;
        for (tri, n) in [(Triangulation::figure_eight(), 1), (Triangulation::whitehead(), 2)] {
            for a in [0.0, 0.02, 0.05] {
                let mut t = vec![c(0.0, 0.0); n];
                t[0] = c(0.0, 2.0 * PI * a);
                let s = solve_gluing(&tri, &t).map_err(|e| e.to_string())?;
                glue = glue.max(gluing_residual(&tri, &s.shapes, &t));
            }
        }
        ensure(glue < 1e-12, || format!("gluing residual {glue:.2e}"))?;
        Ok(format!("identity defect {worst:.2e}, gluing residual {glue:.2e}"))
    })
}

// ---- 9. determinism --------------------------------------------------------

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn pipeline(dir: &Path) -> std::result::Result<Vec<(String, Vec<u8>)>, String> {
    std::fs::create_dir_all(dir).map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_charvar");
    let p = |s: &str| dir.join(s).to_string_lossy().into_owned();
    let d = |s: &str| data(s).to_string_lossy().into_owned();
    let jobs: Vec<(&str, Vec<String>)> = vec![
        ("f8.curve", vec!["eigenvariety".into(), d("links/figure_eight.json")]),
        ("wh2.curve", vec!["eigenvariety".into(), d("links/whitehead.json"), "--component".into(), "2".into(), "--slice-signs".into(), "+".into()]),
        ("tempered.txt", vec!["tempered".into(), p("f8.curve")]),
        ("tame.txt", vec!["tame".into(), p("f8.curve")]),
        ("reduce.txt", vec!["symbol-reduce".into(), "{x, 1 - x} * {x*y, y}^2".into()]),
        ("rectangle.csv", vec!["integrate".into(), p("f8.curve"), "--path".into(), d("paths/rectangle.json")]),
        ("volume.csv", vec!["volume-path".into(), d("links/figure_eight.json"), "--path".into(), d("paths/deform.json")]),
        ("quantize.txt", vec!["quantize".into(), p("f8.curve"), "--loop".into(), d("paths/circle.json")]),
        ("oracle.txt", vec!["oracle-volume".into(), "whitehead".into(), "--deform".into(), "0.03".into()]),
    ];
    let mut out = Vec::new();
    for (file, args) in jobs {
        let status = Command::new(bin)
            .args(&args)
            .args(["--seed", "0", "--out", &p(file)])
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), || format!("{args:?} exited with {status}"))?;
        out.push((file.to_string(), std::fs::read(p(file)).map_err(|e| e.to_string())?));
    }
    Ok(out)
}

fn criterion_9() -> bool {
    run(9, "determinism", Duration::from_secs(120), || {
        let root = std::env::temp_dir().join(format!("charvar-acceptance-{}", std::process::id()));
        let a = pipeline(&root.join("a"))?;
        let b = pipeline(&root.join("b"))?;
        let _ = std::fs::remove_dir_all(&root);
        for ((name, x), (_, y)) in a.iter().zip(&b) {
            ensure(x == y, || format!("{name} differs between runs"))?;
        }
        Ok(format!("{} outputs byte-identical across two runs", a.len()))
    })
}

#[test]
fn acceptance() {
    let mut f8 = two_bridge(5, 3, 1, &[]);
    f8.epsilon = calibrate_epsilon(&f8).unwrap().epsilon;
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(&f8),
        criterion_5(&f8),
        criterion_6(&f8),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
