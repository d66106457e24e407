use std::f64::consts::PI;

use charvar_core::k2::symbol_order_candidate;
use charvar_core::oracle::bloch_wigner;
use charvar_core::regulator::*;
use charvar_core::repvar::{eigen_curve, rep_family, EigenCurve, TwoBridgeCode};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn two_bridge(p: u32, q: u32, i: usize, s: &[i8]) -> EigenCurve {
    eigen_curve(&rep_family(&TwoBridgeCode::new(p, q).unwrap()).unwrap(), i, s).unwrap()
}

fn figure_eight() -> EigenCurve {
    two_bridge(5, 3, 1, &[])
}

fn track(curve: &EigenCurve, spec: &PathSpec, start: &PathState) -> Vec<PathState> {
    track_path(std::slice::from_ref(curve), spec, start).unwrap()
}

fn from_basepoint(curve: &EigenCurve, spec: &PathSpec) -> Vec<PathState> {
    track(curve, spec, &PathState::at_basepoint(std::slice::from_ref(curve)).unwrap())
}

/// State at log m = w, reached from the basepoint along a straight log-chart segment.
fn state_at(curve: &EigenCurve, w: Complex64) -> PathState {
    let states = from_basepoint(curve, &PathSpec::exp_segment(c(0.0, 0.0), w, 200));
    let mut s = states.last().unwrap().clone();
    s.t = 0.0;
    s.eta_acc = 0.0;
    s.xi_acc = 0.0;
    s
}

fn reversed(states: &[PathState]) -> Vec<PathState> {
    states.iter().rev().cloned().collect()
}

#[test]
fn constant_path_is_stationary() {
    let f8 = figure_eight();
    let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), c(0.0, 0.0), 10));
    assert!(states.iter().all(|s| s.comps == states[0].comps));
    assert_eq!(integrate_eta(&states, &[1.0]).unwrap(), 0.0);
    assert_eq!(integrate_xi(&states, &[1.0]).unwrap(), 0.0);
    assert_eq!(monodromy(&states, &[1.0]).unwrap(), c(1.0, 0.0));
    let q = quantization_check(&states, &[1.0], None).unwrap();
    assert_eq!((q.p, q.q, q.residual), (0, 1, 0.0));
}

#[test]
fn tracked_states_stay_on_the_curve() {
    let f8 = figure_eight();
    let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), c(0.0, 0.1 * PI), 400));
    for s in &states {
        let p = s.comps[0];
        assert!(f8.residual(p.l, p.m) < 1e-9);
        assert!((p.log_l.exp() - p.l).norm() < 1e-10 * p.l.norm());
        assert!((p.log_m.exp() - p.m).norm() < 1e-10);
    }
    for w in states.windows(2) {
        assert!((w[1].comps[0].log_l - w[0].comps[0].log_l).im.abs() < PI / 2.0);
    }
}

#[test]
fn reversal_negates_both_integrals() {
    let f8 = figure_eight();
    let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), c(0.1, 0.3), 200));
    let back = reversed(&states);
    for f in [integrate_eta, integrate_xi] {
        let (a, b) = (f(&states, &[1.0]).unwrap(), f(&back, &[1.0]).unwrap());
        assert!(a.abs() > 1e-4 && (a + b).abs() < 1e-12, "{a} {b}");
    }
}

#[test]
fn branch_point_is_reported() {
    // (l − 1)² = m − 1 ramifies over m = 1
    let curve = EigenCurve {
        link: "synthetic".into(),
        code: None,
        component: 1,
        poly: "l^2 - 2*l - m + 2".parse().unwrap(),
        slice_signs: vec![],
        epsilon: 1,
        basepoint: None,
    };
    let l0 = c(1.0 + 0.5f64.sqrt(), 0.0);
    let start = PathState::new(vec![CompState::new(l0, c(1.5, 0.0))]);
    let spec = PathSpec::log_polyline(&[c(1.5f64.ln(), 0.0), c(0.5f64.ln(), 0.0)], 40, false);
    let err = track_path(std::slice::from_ref(&curve), &spec, &start).unwrap_err();
    assert_eq!(err.class(), "branch-point", "{err}");
    // m = 1 exactly on a grid point
    let on_grid = PathSpec::circle(1.0, 1, 40);
    let mut spec = on_grid.clone();
    spec.closed = false;
    spec.components[0].segments =
        vec![Segment::Polyline { points: vec![[1.5f64.ln(), 0.0], [0.0, 0.0], [0.5f64.ln(), 0.0]] }];
    let err = track_path(std::slice::from_ref(&curve), &spec, &start).unwrap_err();
    assert_eq!(err.class(), "branch-point", "{err}");
    // the same curve is tracked without complaint away from the ramification point
    let ok = PathSpec::log_polyline(&[c(1.5f64.ln(), 0.0), c(2.0f64.ln(), 0.0)], 40, false);
    assert!(track_path(&[curve], &ok, &start).is_ok());
}

#[test]
fn leaving_the_torus_is_reported() {
    let curve = EigenCurve {
        link: "synthetic".into(),
        code: None,
        component: 1,
        poly: "l - m^4".parse().unwrap(),
        slice_signs: vec![],
        epsilon: 1,
        basepoint: None,
    };
    let start = PathState::new(vec![CompState::new(c(1.0, 0.0), c(1.0, 0.0))]);
    let spec = PathSpec::exp_segment(c(0.0, 0.0), c(-6.0, 0.0), 200);
    assert_eq!(track_path(&[curve], &spec, &start).unwrap_err().class(), "divisor-collision");
}

fn random_rectangle(rng: &mut ChaCha8Rng) -> [Complex64; 5] {
    // log-m chart, away from the node at 0 and from the branch points at ±0.48, ±iπ/3
    let mut side = |lo: f64, hi: f64| loop {
        let (a, b): (f64, f64) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        if a.abs() > 0.05 && b.abs() > 0.05 && (a - b).abs() > 0.1 {
            return (a.min(b), a.max(b));
        }
    };
    let (x0, x1) = side(-0.4, 0.4);
    let (y0, y1) = side(-0.8, 0.8);
    [c(x0, y0), c(x1, y0), c(x1, y1), c(x0, y1), c(x0, y0)]
}

#[test]
fn contractible_loops_have_trivial_integrals_and_flat_monodromy() {
    let f8 = figure_eight();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let rect = random_rectangle(&mut rng);
        let start = state_at(&f8, rect[0]);
        let states = track(&f8, &PathSpec::log_polyline(&rect, 8000, true), &start);
        let eta = integrate_eta(&states, &[1.0]).unwrap();
        assert!(eta.abs() < 1e-7, "η over {rect:?} = {eta}");
        let m = monodromy(&states, &[1.0]).unwrap();
        assert!((m.norm() - 1.0).abs() < 1e-8, "{m}");
        // ∮ log l dm/m vanishes too (flatness)
        let q = quantization_check(&states, &[1.0], None).unwrap();
        assert_eq!(q.p, 0, "{q:?}");
    }
}

#[test]
fn meridian_circle_quantizes() {
    let f8 = figure_eight();
    let start = state_at(&f8, c(1.2f64.ln(), 0.0));
    let once = track(&f8, &PathSpec::circle(1.2, 1, 800), &start);
    let twice = track(&f8, &PathSpec::circle(1.2, 2, 1600), &start);
    let order = symbol_order_candidate(&f8).unwrap().order;
    let q1 = quantization_check(&once, &[1.0], Some(order)).unwrap();
    let q2 = quantization_check(&twice, &[1.0], Some(order)).unwrap();
    assert!(q1.q <= 64 && q1.residual < 1e-5, "{q1:?}");
    assert_eq!(q2.p * q1.q, 2 * q1.p * q2.q, "{q1:?} {q2:?}");
    assert!(!q1.parabolic_start);
    let m = monodromy(&once, &[1.0]).unwrap();
    assert!((m.norm() - 1.0).abs() < 1e-8, "{m}");
    assert!((m.powi(q1.q as i32) - 1.0).norm() < 1e-6, "{m} {q1:?}");
    assert!(integrate_eta(&once, &[1.0]).unwrap().abs() < 1e-7);
}

#[test]
fn open_paths_are_rejected_by_loop_operations() {
    let f8 = figure_eight();
    let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), c(0.1, 0.1), 20));
    assert_eq!(monodromy(&states, &[1.0]).unwrap_err().class(), "open-path");
    assert_eq!(quantization_check(&states, &[1.0], None).unwrap_err().class(), "open-path");
}

#[test]
fn coarse_grids_fail_the_richardson_gate() {
    let f8 = figure_eight();
    // (a full circle is periodic, where the trapezoid rule is spectrally accurate)
    let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), c(0.3, 0.6), 4));
    assert_eq!(integrate_eta(&states, &[1.0]).unwrap_err().class(), "insufficient-samples");
    assert_eq!(integrate_xi(&states, &[1.0]).unwrap_err().class(), "insufficient-samples");
}

#[test]
fn complete_volumes() {
    let tet = 2.0 * bloch_wigner(c(0.5, 3f64.sqrt() / 2.0)).unwrap();
    let f8 = figure_eight();
    let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), c(0.0, 0.0), 2));
    let v = volume_along(&states, &[1.0], complete_volume(&f8).unwrap()).unwrap();
    assert!((v - tet).abs() < 1e-10 && (v - 2.02988321).abs() < 1e-6);
    let wh = two_bridge(8, 3, 1, &[1]);
    assert!((complete_volume(&wh).unwrap() - 3.66386238).abs() < 1e-6);
}

#[test]
fn volume_matches_the_gluing_oracle_along_the_deformation() {
    let f8 = figure_eight();
    let cal = calibrate_epsilon(&f8).unwrap();
    assert!(cal.residual < 1e-6, "{cal:?}");
    let eps = [cal.epsilon as f64];
    for k in 1..=10 {
        let a = 0.005 * k as f64;
        let end = c(0.0, PI * a);
        let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), end, 100));
        let v = volume_along(&states, &eps, cal.vol).unwrap();
        let oracle = oracle_volume(&f8, end).unwrap();
        assert!((v - oracle).abs() < 1e-5, "a = {a}: {v} vs {oracle}");
    }
}

#[test]
fn volume_is_path_independent() {
    let f8 = figure_eight();
    let end = c(0.05, 0.2);
    let straight = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), end, 200));
    let bent = from_basepoint(&f8, &PathSpec::log_polyline(&[c(0.0, 0.0), c(0.0, 0.2), end], 400, false));
    let (a, b) = (integrate_eta(&straight, &[1.0]).unwrap(), integrate_eta(&bent, &[1.0]).unwrap());
    assert!((a - b).abs() < 5e-7, "{a} {b}");
    let (ua, ub) = (
        special_cs_along(&straight, &[1.0], 2, None).unwrap(),
        special_cs_along(&bent, &[1.0], 2, None).unwrap(),
    );
    assert!((ua.u - ub.u).abs() < 1e-6 && ua.uncalibrated);
}

#[test]
fn special_cs_cancels_on_a_back_and_forth_path() {
    let f8 = figure_eight();
    let end = c(0.1, 0.3);
    let spec = PathSpec::log_polyline(&[c(0.0, 0.0), end, c(0.0, 0.0)], 400, false);
    let states = from_basepoint(&f8, &spec);
    let u = special_cs_along(&states, &[1.0], 1, Some(0.25)).unwrap();
    assert!((u.u - PI * PI).abs() < 1e-9 && !u.uncalibrated, "{u:?}");
}

#[test]
fn whitehead_slices_calibrate() {
    for s in [1, -1] {
        let wh = two_bridge(8, 3, 1, &[s]);
        let cal = calibrate_epsilon(&wh).unwrap();
        assert!(cal.residual < 1e-6, "{cal:?}");
    }
}

#[test]
fn csv_rows() {
    let f8 = figure_eight();
    let states = from_basepoint(&f8, &PathSpec::exp_segment(c(0.0, 0.0), c(0.0, 0.05), 4));
    let csv = write_csv(&states, Some(2.0));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,l_re,l_im,m_re,m_im,eta_acc,xi_acc,V");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0.0000000000000000e0,-1.0000000000000000e0,"));
    assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 8));
}

#[test]
fn whitehead_meridian_circle_is_half_integral() {
    // log l picks up 2πi per turn here, so doubling only holds modulo integers
    let wh = two_bridge(8, 3, 1, &[1]);
    let start = state_at(&wh, c(1.2f64.ln(), 0.0));
    let once = track(&wh, &PathSpec::circle(1.2, 1, 800), &start);
    let twice = track(&wh, &PathSpec::circle(1.2, 2, 1600), &start);
    let q1 = quantization_check(&once, &[1.0], None).unwrap();
    let q2 = quantization_check(&twice, &[1.0], None).unwrap();
    assert_eq!(q1.q, 2, "{q1:?}");
    assert!(((q2.value - 2.0 * q1.value) - (q2.value - 2.0 * q1.value).round()).abs() < 1e-9);
    let m = monodromy(&once, &[1.0]).unwrap();
    assert!((m.powi(2) - 1.0).norm() < 1e-8 && (m.norm() - 1.0).abs() < 1e-8, "{m}");
}
