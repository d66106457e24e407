use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use charvar_core::k2::{edge_places, symbol_normalize, symbol_order_candidate, tame_symbol, temperedness, FormalSymbol};
use charvar_core::oracle::{deformed_volume, triangulation_for_code, Triangulation};
use charvar_core::regulator::{
    calibrate_epsilon, complete_volume, eta_estimate, integrate_eta, integrate_xi, monodromy,
    quantization_check, special_cs_along, track_path, write_csv, xi_estimate, PathSpec, PathState,
};
use charvar_core::repvar::{eigen_curve, read_curve, rep_family, solved_points, write_curve, EigenCurve, LinkInput};
use charvar_core::{Error, Result};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Global;

const APPROACH_SAMPLES: usize = 200;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_signs(s: &str) -> Result<Vec<i8>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            other => Err(Error::InvalidSlice(format!("slice sign {other:?} is not ±1"))),
        })
        .collect()
}

fn build_curve(link: &Path, component: usize, signs: &str) -> Result<(EigenCurve, charvar_core::repvar::RepFamily, Vec<i8>)> {
    let input = LinkInput::from_json(&read(link)?)?;
    let fam = rep_family(&input.code()?)?;
    let signs = parse_signs(signs)?;
    let mut curve = eigen_curve(&fam, component, &signs)?;
    curve.link = input.name();
    Ok((curve, fam, signs))
}

fn load_curves(paths: &[std::path::PathBuf]) -> Result<Vec<EigenCurve>> {
    paths.iter().map(|p| read_curve(&read(p)?)).collect()
}

fn f(x: f64) -> String {
    format!("{x:.16e}")
}

fn c(z: Complex64) -> String {
    format!("{:.16e} {:.16e}", z.re, z.im)
}

pub fn eigenvariety(g: &Global, link: &Path, component: usize, signs: &str, require_hyperbolic: bool) -> Result<String> {
    let (mut curve, fam, signs) = build_curve(link, component, signs)?;
    if require_hyperbolic && curve.basepoint.is_none() {
        return Err(Error::NoHyperbolicSolution(format!("{} has no discrete faithful representation", curve.link)));
    }
    let n = g.samples.unwrap_or(20);
    let tol = g.tol.unwrap_or(1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let worst = solved_points(&fam, component, &signs, n, &mut rng)?
        .iter()
        .map(|p| curve.residual(p.l, p.m))
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::InconsistentFamily(format!("curve residual {worst:.3e} at a solved representation exceeds {tol:.1e}")));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# verified at {n} solved representations (seed {}): max scaled residual {worst:.3e}", g.seed);
    if curve.basepoint.is_some() {
        match calibrate_epsilon(&curve) {
            Ok(cal) => {
                curve.epsilon = cal.epsilon;
                let _ = writeln!(
                    out,
                    "# epsilon calibrated on m = exp(i pi {}): Vol {}, eta {}, oracle {}, residual {:.3e}",
                    cal.a,
                    f(cal.vol),
                    f(cal.eta),
                    f(cal.oracle),
                    cal.residual
                );
            }
            Err(Error::NoHyperbolicSolution(why)) => {
                let _ = writeln!(out, "# epsilon not calibrated: {why}");
            }
            Err(e) => return Err(e),
        }
    } else {
        let _ = writeln!(out, "# no hyperbolic basepoint: epsilon not calibrated");
    }
    out.push_str(&write_curve(&curve));
    Ok(out)
}

pub fn tempered(curve: &Path) -> Result<String> {
    Ok(temperedness(&read_curve(&read(curve)?)?)?.to_string())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn tame(curve: &Path, symbol: Option<&str>) -> Result<String> {
    let curve = read_curve(&read(curve)?)?;
    let s = match symbol {
        Some(text) => symbol_normalize(&FormalSymbol::parse(text)?),
        None => FormalSymbol::curve_symbol(curve.epsilon as i64),
    };
    let mut out = String::new();
    let _ = writeln!(out, "symbol: {s}");
    let mut order = Some(1u64);
    for p in edge_places(&curve)? {
        let v = tame_symbol(&s, &p)?;
        order = match (order, v.order) {
            (Some(a), Some(b)) => Some(a / gcd(a, b) * b),
            _ => None,
        };
        let _ = writeln!(out, "{}: {v}", p.label());
    }
    match order {
        Some(n) => writeln!(out, "order_candidate: {n}"),
        None => writeln!(out, "order_candidate: none (a tame value is not a root of unity)"),
    }
    .ok();
    Ok(out)
}

pub fn symbol_reduce(text: &str) -> Result<String> {
    let text = match text.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => text.to_string(),
    };
    Ok(format!("{}\n", symbol_normalize(&FormalSymbol::parse(text.trim())?)))
}

struct Tracked {
    states: Vec<charvar_core::regulator::PathState>,
    eps: Vec<f64>,
    approach_eta: f64,
    approach_xi: f64,
}

/// Track from the basepoints to the start of `spec` along straight log-m
/// segments, then along `spec`.
fn track_from_basepoint(curves: &[EigenCurve], spec: &PathSpec) -> Result<Tracked> {
    let base = PathState::at_basepoint(curves)?;
    let eps: Vec<f64> = curves.iter().map(|c| c.epsilon as f64).collect();
    let away = (0..curves.len()).any(|i| (spec.meridian(i, 0.0) - base.comps[i].m).norm() > 1e-12);
    let (start, approach_eta, approach_xi) = if away {
        let approach = PathSpec {
            components: (0..curves.len())
                .map(|i| PathSpec::exp_segment(base.comps[i].m.ln(), spec.meridian(i, 0.0).ln(), 0).components.remove(0))
                .collect(),
            samples: APPROACH_SAMPLES,
            closed: false,
        };
        let states = track_path(curves, &approach, &base)?;
        let mut last = states.last().cloned().expect("nonempty track");
        last.t = 0.0;
        last.eta_acc = 0.0;
        last.xi_acc = 0.0;
        (last, integrate_eta(&states, &eps)?, integrate_xi(&states, &eps)?)
    } else {
        (base, 0.0, 0.0)
    };
    let states = track_path(curves, spec, &start)?;
    Ok(Tracked { states, eps, approach_eta, approach_xi })
}

fn load_spec(g: &Global, path: &Path) -> Result<PathSpec> {
    let mut spec = PathSpec::from_json(&read(path)?)?;
    if let Some(n) = g.samples {
        spec.samples = n;
        spec.validate()?;
    }
    Ok(spec)
}

fn link_volume(curves: &[EigenCurve]) -> Option<(f64, String)> {
    let curve = curves.first()?;
    let code = curve.code?;
    triangulation_for_code(code.p, code.q)?;
    let vol = complete_volume(curve).ok()?;
    Some((vol, format!("gluing oracle, triangulation for two-bridge {}/{}", code.p, code.q)))
}

fn order_candidate(curves: &[EigenCurve]) -> Option<u64> {
    curves.iter().try_fold(1u64, |acc, c| {
        let n = symbol_order_candidate(c).ok()?.order;
        Some(acc / gcd(acc, n) * n)
    })
}

fn loop_report(out: &mut String, tr: &Tracked, q_cand: Option<u64>) {
    match monodromy(&tr.states, &tr.eps) {
        Ok(m) => {
            let _ = writeln!(out, "monodromy: {}", c(m));
            let _ = writeln!(out, "monodromy_abs_minus_one: {:.3e}", (m.norm() - 1.0).abs());
            if let Ok(q) = quantization_check(&tr.states, &tr.eps, q_cand) {
                let _ = writeln!(out, "monodromy_power_q_minus_one: {:.3e}", (m.powi(q.q as i32) - 1.0).norm());
            }
        }
        Err(e) => {
            let _ = writeln!(out, "monodromy: failed ({}: {e})", e.class());
        }
    }
    match quantization_check(&tr.states, &tr.eps, q_cand) {
        Ok(q) => {
            let _ = writeln!(out, "p/q: {}/{}", q.p, q.q);
            let _ = writeln!(out, "quantization_value: {}", f(q.value));
            let _ = writeln!(out, "quantization_residual: {:.3e}", q.residual);
            let _ = writeln!(out, "parabolic_start: {}", q.parabolic_start);
        }
        Err(e) => {
            let _ = writeln!(out, "p/q: failed ({}: {e})", e.class());
        }
    }
}

pub fn integrate(g: &Global, paths: &[std::path::PathBuf], path: &Path, cs: Option<f64>, q: Option<u64>) -> Result<String> {
    let curves = load_curves(paths)?;
    let spec = load_spec(g, path)?;
    let tr = track_from_basepoint(&curves, &spec)?;
    let eta = eta_estimate(&tr.states, &tr.eps)?;
    let xi = xi_estimate(&tr.states, &tr.eps)?;
    integrate_eta(&tr.states, &tr.eps)?;
    integrate_xi(&tr.states, &tr.eps)?;
    let vol = link_volume(&curves);
    let q_cand = order_candidate(&curves);
    let q_used = q.or(q_cand).unwrap_or(1);
    let special = special_cs_along(&tr.states, &tr.eps, q_used, cs)?;

    let mut out = write_csv(&tr.states, vol.as_ref().map(|(v, _)| v + 2.0 * tr.approach_eta));
    out.push_str("\n[summary]\n");
    let _ = writeln!(out, "components: {}", curves.len());
    for cu in &curves {
        let _ = writeln!(out, "epsilon[{}]: {:+} (curve file)", cu.component, cu.epsilon);
    }
    let _ = writeln!(out, "samples: {}", spec.samples);
    let _ = writeln!(out, "approach_samples: {APPROACH_SAMPLES}");
    let _ = writeln!(out, "approach_eta: {}", f(tr.approach_eta));
    let _ = writeln!(out, "approach_xi: {}", f(tr.approach_xi));
    let _ = writeln!(out, "eta_integral: {}", f(eta.value));
    let _ = writeln!(out, "eta_error: {:.3e}", eta.error);
    let _ = writeln!(out, "xi_integral: {}", f(xi.value));
    let _ = writeln!(out, "xi_error: {:.3e}", xi.error);
    match &vol {
        Some((v, src)) => {
            let _ = writeln!(out, "Vol(L): {} ({src})", f(*v));
            let _ = writeln!(out, "V: {}", f(v + 2.0 * (tr.approach_eta + eta.value)));
        }
        None => {
            let _ = writeln!(out, "V: unavailable (no bundled triangulation)");
        }
    }
    let u = special.u - q_used as f64 * tr.approach_xi;
    let src = match (q, q_cand) {
        (Some(_), _) => "--q",
        (None, Some(_)) => "tame-symbol order candidate",
        (None, None) => "default",
    };
    let _ = writeln!(out, "q: {q_used} ({src})");
    let cs_note = if special.uncalibrated { "CS(L) = 0, uncalibrated" } else { "CS(L) supplied" };
    let _ = writeln!(out, "U: {} ({cs_note})", f(u));
    if spec.closed {
        loop_report(&mut out, &tr, q_cand);
    }
    Ok(out)
}

pub fn volume_path(g: &Global, link: &Path, path: &Path, component: usize, signs: &str) -> Result<String> {
    let (mut curve, _, _) = build_curve(link, component, signs)?;
    let cal = calibrate_epsilon(&curve)?;
    curve.epsilon = cal.epsilon;
    let curves = [curve];
    let spec = load_spec(g, path)?;
    let tr = track_from_basepoint(&curves, &spec)?;
    let grid = spec.grid();
    let constant = grid.iter().all(|t| (spec.meridian(0, *t) - spec.meridian(0, 0.0)).norm() < 1e-15);
    let states = if constant && tr.approach_eta == 0.0 { &tr.states[..1] } else { &tr.states[..] };
    let offset = cal.vol + 2.0 * tr.approach_eta;
    let mut out = write_csv(states, Some(offset));
    let v_end = offset + 2.0 * states.last().map_or(0.0, |s| s.eta_acc);
    out.push_str("\n[summary]\n");
    let _ = writeln!(out, "link: {}", curves[0].link);
    let _ = writeln!(out, "Vol(L): {} (gluing oracle)", f(cal.vol));
    let _ = writeln!(
        out,
        "epsilon: {:+} (calibrated on m = exp(i pi {}), residual {:.3e})",
        cal.epsilon, cal.a, cal.residual
    );
    let _ = writeln!(out, "rows: {}", states.len());
    let _ = writeln!(out, "V: {}", f(v_end));
    if states.len() > 1 {
        let eta = eta_estimate(states, &tr.eps)?;
        integrate_eta(states, &tr.eps)?;
        let _ = writeln!(out, "V_richardson: {}", f(offset + 2.0 * eta.value));
        let _ = writeln!(out, "V_error: {:.3e}", 2.0 * eta.error);
    }
    let end = states.last().expect("nonempty").comps[0].log_m;
    match charvar_core::regulator::oracle_volume(&curves[0], end) {
        Ok(v) => {
            let _ = writeln!(out, "oracle_V: {}", f(v));
        }
        Err(e) => {
            let _ = writeln!(out, "oracle_V: unavailable ({})", e.class());
        }
    }
    Ok(out)
}

pub fn quantize(g: &Global, paths: &[std::path::PathBuf], loop_path: &Path) -> Result<String> {
    let curves = load_curves(paths)?;
    let spec = load_spec(g, loop_path)?;
    if !spec.closed {
        return Err(Error::InvalidPath("quantize needs a closed loop".into()));
    }
    let tr = track_from_basepoint(&curves, &spec)?;
    let q_cand = order_candidate(&curves);
    let q = quantization_check(&tr.states, &tr.eps, q_cand)?;
    if let Some(tol) = g.tol {
        if q.residual > tol {
            return Err(Error::ReconstructionFailure { value: q.value, p: q.p, q: q.q, residual: q.residual });
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "p/q: {}/{}", q.p, q.q);
    let _ = writeln!(out, "value: {}", f(q.value));
    let _ = writeln!(out, "residual: {:.3e}", q.residual);
    let _ = writeln!(out, "quadrature_error: {:.3e}", q.quadrature_error);
    match q_cand {
        Some(n) => writeln!(out, "order_candidate: {n}"),
        None => writeln!(out, "order_candidate: none"),
    }
    .ok();
    let _ = writeln!(out, "parabolic_start: {}", q.parabolic_start);
    let m = monodromy(&tr.states, &tr.eps)?;
    let _ = writeln!(out, "monodromy: {}", c(m));
    let _ = writeln!(out, "monodromy_abs_minus_one: {:.3e}", (m.norm() - 1.0).abs());
    let _ = writeln!(out, "monodromy_power_q_minus_one: {:.3e}", (m.powi(q.q as i32) - 1.0).norm());
    Ok(out)
}

pub fn oracle_volume(link: &str, deform: f64, component: usize) -> Result<String> {
    let tri = match Triangulation::by_name(link) {
        Some(t) => t,
        None => {
            let input = LinkInput::from_json(&read(Path::new(link))?)?;
            let code = input.code()?;
            triangulation_for_code(code.p, code.q)
                .ok_or_else(|| Error::NoHyperbolicSolution(format!("no bundled triangulation for {}", input.name())))?
        }
    };
    let mut log_m = vec![Complex64::new(0.0, 0.0); tri.cusps.len()];
    let slot = log_m
        .get_mut(component.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidSlice(format!("component {component} out of range 1..={}", tri.cusps.len())))?;
    *slot = Complex64::new(0.0, PI * deform);
    let v = deformed_volume(&tri, &log_m)?;
    Ok(format!("volume: {}\n", f(v)))
}
