use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use super::path::{locate, PathSpec, Piece};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::repvar::{EigenCurve, L, M};

pub const RESIDUAL_TOL: f64 = 1e-9;
pub const JACOBIAN_TOL: f64 = 1e-12;
pub const TORUS_BOUNDS: (f64, f64) = (1e-8, 1e8);
const MAX_DEPTH: u32 = 30;
const NEWTON_ITERS: usize = 40;
/// Below this scaled Jacobian a failed step is blamed on a nearby branch point.
/// Near a square-root point the Jacobian grows like √|m − m*|, and bisection
/// stalls at |m − m*| ≈ 1e−7, i.e. a scaled Jacobian of order 1e−4.
const NEAR_SINGULAR: f64 = 1e-3;

/// Point of one component curve with continuously tracked logarithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompState {
    pub l: Complex64,
    pub m: Complex64,
    pub log_l: Complex64,
    pub log_m: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathState {
    pub t: f64,
    pub comps: Vec<CompState>,
    /// running fine-grid trapezoid sums of η and ξ (with the curves' ε)
    pub eta_acc: f64,
    pub xi_acc: f64,
}

impl CompState {
    pub fn new(l: Complex64, m: Complex64) -> CompState {
        CompState { l, m, log_l: l.ln(), log_m: m.ln() }
    }
}

impl PathState {
    pub fn new(comps: Vec<CompState>) -> PathState {
        PathState { t: 0.0, comps, eta_acc: 0.0, xi_acc: 0.0 }
    }

    /// The complete structure on every curve.
    pub fn at_basepoint(curves: &[EigenCurve]) -> Result<PathState> {
        let comps = curves
            .iter()
            .map(|c| {
                c.basepoint
                    .as_ref()
                    .map(|b| CompState::new(b.l, b.m))
                    .ok_or_else(|| Error::NoHyperbolicSolution(format!("{} has no basepoint", c.link)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PathState::new(comps))
    }
}

struct Tracker<'a> {
    curve: &'a EigenCurve,
    a_l: MultiPoly,
    a_m: MultiPoly,
}

enum Step {
    Done(CompState),
    /// refine; carries the smaller scaled Jacobian at the two ends of the step
    Refine(f64),
}

impl<'a> Tracker<'a> {
    fn new(curve: &'a EigenCurve) -> Self {
        Tracker { curve, a_l: curve.poly.derivative(L), a_m: curve.poly.derivative(M) }
    }

    fn eval(&self, l: Complex64, m: Complex64) -> (Complex64, Complex64, f64) {
        let b = [(L, l), (M, m)];
        let scale = self.curve.poly.abs_scale(&b).max(f64::MIN_POSITIVE);
        (self.curve.poly.eval_complex(&b), self.a_l.eval_complex(&b), scale)
    }

    /// |l ∂A/∂l| relative to Σ|c||l|^i|m|^j.
    fn jacobian(&self, l: Complex64, m: Complex64) -> f64 {
        let (_, al, s) = self.eval(l, m);
        (al * l).norm() / s
    }

    fn slope(&self, st: &CompState, t: f64) -> Result<Complex64> {
        let (_, al, s) = self.eval(st.l, st.m);
        let jac = (al * st.l).norm() / s;
        if jac < 1e-8 {
            // a node of the plane curve: only the basepoint carries a branch direction
            if let Some(b) = &self.curve.basepoint {
                if (b.l - st.l).norm() < 1e-9 && (b.m - st.m).norm() < 1e-9 {
                    return Ok(b.branch_slope);
                }
            }
            if jac < JACOBIAN_TOL {
                return Err(Error::BranchPoint { t, jacobian: jac });
            }
        }
        let am = self.a_m.eval_complex(&[(L, st.l), (M, st.m)]);
        Ok(-am / al)
    }

    fn newton(&self, mut l: Complex64, m: Complex64) -> Option<Complex64> {
        let (mut a, mut al, s) = self.eval(l, m);
        let mut res = a.norm() / s;
        for _ in 0..NEWTON_ITERS {
            if res < 1e-14 {
                break;
            }
            if al.norm() == 0.0 {
                return None;
            }
            let dl = a / al;
            let mut lambda = 1.0;
            let mut moved = false;
            for _ in 0..12 {
                let cand = l - dl * lambda;
                let (ca, cal, cs) = self.eval(cand, m);
                let cres = ca.norm() / cs;
                if cres < res {
                    (l, a, al, res) = (cand, ca, cal, cres);
                    moved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if !moved || dl.norm() * lambda < 1e-16 * l.norm() {
                break;
            }
        }
        (res < RESIDUAL_TOL * 1e-2).then_some(l)
    }

    fn try_step(&self, st: &CompState, m1: Complex64, t: f64) -> Result<Step> {
        let dm = m1 - st.m;
        let l_pred = st.l + self.slope(st, t)? * dm;
        let jac0 = self.jacobian(st.l, st.m);
        let Some(l1) = self.newton(l_pred, m1) else {
            return Ok(Step::Refine(jac0.min(self.jacobian(l_pred, m1))));
        };
        let jac = jac0.min(self.jacobian(l1, m1));
        let allowed = 0.1 * st.l.norm() * (dm / st.m).norm() + 1e-14 * st.l.norm();
        let dlog_l = (l1 / st.l).ln();
        let dlog_m = (m1 / st.m).ln();
        if (l1 - l_pred).norm() > allowed || dlog_l.im.abs() >= FRAC_PI_2 || dlog_m.im.abs() >= FRAC_PI_2 {
            return Ok(Step::Refine(jac));
        }
        Ok(Step::Done(CompState { l: l1, m: m1, log_l: st.log_l + dlog_l, log_m: st.log_m + dlog_m }))
    }

    fn advance(&self, piece: &Piece, st: CompState, s0: f64, s1: f64, t0: f64, t1: f64, depth: u32) -> Result<CompState> {
        match self.try_step(&st, piece.at(s1), t1)? {
            Step::Done(next) => Ok(next),
            Step::Refine(jac) if depth >= MAX_DEPTH => {
                if jac < NEAR_SINGULAR {
                    Err(Error::BranchPoint { t: t1, jacobian: jac })
                } else {
                    Err(Error::TrackingFailure { t: t1, reason: format!("step bisected {MAX_DEPTH} times (scaled |dA/dl| = {jac:.3e})") })
                }
            }
            Step::Refine(_) => {
                let (sm, tm) = (0.5 * (s0 + s1), 0.5 * (t0 + t1));
                let mid = self.advance(piece, st, s0, sm, t0, tm, depth + 1)?;
                self.advance(piece, mid, sm, s1, tm, t1, depth + 1)
            }
        }
    }
}

fn check_torus(st: &CompState, t: f64) -> Result<()> {
    let (lo, hi) = TORUS_BOUNDS;
    let (la, ma) = (st.l.norm(), st.m.norm());
    if !(lo..=hi).contains(&la) || !(lo..=hi).contains(&ma) {
        return Err(Error::DivisorCollision { t, l_abs: la, m_abs: ma });
    }
    Ok(())
}

/// Predictor–corrector continuation of every component along its meridian
/// path. One state per grid point of `spec`; running η, ξ sums are filled in.
pub fn track_path(curves: &[EigenCurve], spec: &PathSpec, start: &PathState) -> Result<Vec<PathState>> {
    spec.validate()?;
    if curves.len() != spec.components.len() || curves.len() != start.comps.len() {
        return Err(Error::InvalidPath(format!(
            "{} curves, {} component paths, {} start points",
            curves.len(),
            spec.components.len(),
            start.comps.len()
        )));
    }
    let grid = spec.grid();
    let mut columns = Vec::with_capacity(curves.len());
    for (i, curve) in curves.iter().enumerate() {
        let st0 = start.comps[i];
        if (st0.m - spec.meridian(i, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidPath(format!("component {} path does not start at m = {}", i + 1, st0.m)));
        }
        if curve.residual(st0.l, st0.m) > RESIDUAL_TOL {
            return Err(Error::InvalidPath(format!("start point of component {} is not on the curve", i + 1)));
        }
        check_torus(&st0, 0.0)?;
        let tracker = Tracker::new(curve);
        let pieces = spec.components[i].pieces();
        let n = pieces.len();
        let mut col = vec![st0];
        let mut cur = st0;
        for w in grid.windows(2) {
            let (k, s0) = locate(n, w[0]);
            let (k1, s1) = locate(n, w[1]);
            // the right end of a piece reads as s = 0 of the next one
            let s1 = if k1 > k { 1.0 } else { s1 };
            cur = tracker.advance(&pieces[k], cur, s0, s1, w[0], w[1], 0)?;
            check_torus(&cur, w[1])?;
            col.push(cur);
        }
        columns.push(col);
    }
    let eps: Vec<f64> = curves.iter().map(|c| c.epsilon as f64).collect();
    let mut out: Vec<PathState> = Vec::with_capacity(grid.len());
    for (k, &t) in grid.iter().enumerate() {
        let comps: Vec<CompState> = columns.iter().map(|c| c[k]).collect();
        let (eta_acc, xi_acc) = match out.last() {
            None => (0.0, 0.0),
            Some(prev) => {
                let (de, dx) = super::integrals::step_forms(&prev.comps, &comps, &eps);
                (prev.eta_acc + de, prev.xi_acc + dx)
            }
        };
        out.push(PathState { t, comps, eta_acc, xi_acc });
    }
    Ok(out)
}
