use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::track::{CompState, PathState};
use crate::error::{Error, Result};
use crate::k2::best_rational;

pub const QUADRATURE_TOL: f64 = 1e-6;
pub const RECONSTRUCTION_TOL: f64 = 1e-5;
pub const DENOMINATOR_CAP: i64 = 64;
const CLOSURE_TOL: f64 = 1e-8;

/// Richardson-extrapolated value with the halving error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Trapezoid increments of η and ξ between two neighbouring states:
/// η = Σε(log|l| d arg m − log|m| d arg l),
/// ξ = −Σε(log|m| d log|l| + arg l d arg m).
pub(crate) fn step_forms(a: &[CompState], b: &[CompState], eps: &[f64]) -> (f64, f64) {
    let mut eta = 0.0;
    let mut xi = 0.0;
    for ((p, q), e) in a.iter().zip(b).zip(eps) {
        let (ll, lm) = (0.5 * (p.log_l + q.log_l), 0.5 * (p.log_m + q.log_m));
        let (dl, dm) = (q.log_l - p.log_l, q.log_m - p.log_m);
        eta += e * (ll.re * dm.im - lm.re * dl.im);
        xi -= e * (lm.re * dl.re + ll.im * dm.im);
    }
    (eta, xi)
}

fn complex_step(a: &[CompState], b: &[CompState], eps: &[f64]) -> Complex64 {
    a.iter()
        .zip(b)
        .zip(eps)
        .map(|((p, q), e)| 0.5 * (p.log_l + q.log_l) * (q.log_m - p.log_m) * *e)
        .sum()
}

fn check_grid(states: &[PathState], eps: &[f64]) -> Result<()> {
    let n = states.len().saturating_sub(1);
    if !n.is_multiple_of(2) {
        return Err(Error::InsufficientSamples { estimate: f64::INFINITY, limit: QUADRATURE_TOL });
    }
    if states.iter().any(|s| s.comps.len() != eps.len()) {
        return Err(Error::InvalidPath(format!("{} epsilons for {} components", eps.len(), states[0].comps.len())));
    }
    Ok(())
}

fn richardson<T, F>(states: &[PathState], f: F, norm: impl Fn(T) -> f64) -> (T, f64)
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Div<f64, Output = T> + Default,
    F: Fn(&[CompState], &[CompState]) -> T,
{
    let fine = states.windows(2).fold(T::default(), |acc, w| acc + f(&w[0].comps, &w[1].comps));
    let coarse = states
        .iter()
        .step_by(2)
        .collect::<Vec<_>>()
        .windows(2)
        .fold(T::default(), |acc, w| acc + f(&w[0].comps, &w[1].comps));
    let diff = (fine - coarse) / 3.0;
    (fine + diff, norm(diff))
}

fn estimate(states: &[PathState], eps: &[f64], pick: fn((f64, f64)) -> f64) -> Result<Estimate> {
    check_grid(states, eps)?;
    let (value, error) = richardson(states, |a, b| pick(step_forms(a, b, eps)), f64::abs);
    Ok(Estimate { value, error })
}

fn gate(e: Estimate) -> Result<f64> {
    if e.error > QUADRATURE_TOL {
        return Err(Error::InsufficientSamples { estimate: e.error, limit: QUADRATURE_TOL });
    }
    Ok(e.value)
}

pub fn eta_estimate(states: &[PathState], eps: &[f64]) -> Result<Estimate> {
    estimate(states, eps, |(e, _)| e)
}

pub fn xi_estimate(states: &[PathState], eps: &[f64]) -> Result<Estimate> {
    estimate(states, eps, |(_, x)| x)
}

/// ∫η along the tracked path (trapezoid + one Richardson halving).
pub fn integrate_eta(states: &[PathState], eps: &[f64]) -> Result<f64> {
    gate(eta_estimate(states, eps)?)
}

/// ∫ξ along the tracked path.
pub fn integrate_xi(states: &[PathState], eps: &[f64]) -> Result<f64> {
    gate(xi_estimate(states, eps)?)
}

fn closure_gap(states: &[PathState]) -> f64 {
    let (a, b) = (&states[0], &states[states.len() - 1]);
    a.comps
        .iter()
        .zip(&b.comps)
        .map(|(p, q)| ((p.l - q.l).norm() / p.l.norm()).max((p.m - q.m).norm() / p.m.norm()))
        .fold(0.0, f64::max)
}

pub fn require_closed(states: &[PathState]) -> Result<()> {
    if states.len() < 2 {
        return Ok(());
    }
    let gap = closure_gap(states);
    if gap > CLOSURE_TOL {
        return Err(Error::OpenPath(format!("endpoints differ by {gap:.3e} on the curve")));
    }
    Ok(())
}

/// M(γ) = exp Σ −ε/(2πi) (∫ log l dm/m − log m(t₀) ∫ dl/l) for a closed path.
pub fn monodromy(states: &[PathState], eps: &[f64]) -> Result<Complex64> {
    require_closed(states)?;
    check_grid(states, eps)?;
    if states.len() < 2 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let (int, err) = richardson(states, |a, b| complex_step(a, b, eps), |z: Complex64| z.norm());
    if err > QUADRATURE_TOL {
        return Err(Error::InsufficientSamples { estimate: err, limit: QUADRATURE_TOL });
    }
    let (first, last) = (&states[0].comps, &states[states.len() - 1].comps);
    let winding: Complex64 =
        first.iter().zip(last).zip(eps).map(|((p, q), e)| p.log_m * (q.log_l - p.log_l) * *e).sum();
    let x = int - winding;
    Ok((-x / Complex64::new(0.0, 2.0 * PI)).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantization {
    pub p: i64,
    pub q: i64,
    /// (1/4π²) Σε∮(log|m| d log|l| + arg l d arg m) = −∮ξ/4π²
    pub value: f64,
    pub residual: f64,
    pub quadrature_error: f64,
    /// every component starts at a meridian of trace ±2
    pub parabolic_start: bool,
}

/// Rational reconstruction of −∮ξ/4π² with denominator ≤ max(q_candidate, 64).
pub fn quantization_check(states: &[PathState], eps: &[f64], q_candidate: Option<u64>) -> Result<Quantization> {
    require_closed(states)?;
    let est = if states.len() < 2 { Estimate { value: 0.0, error: 0.0 } } else { xi_estimate(states, eps)? };
    gate(est)?;
    let value = -est.value / (4.0 * PI * PI);
    let cap = (q_candidate.unwrap_or(1) as i64).max(DENOMINATOR_CAP);
    let (p, q) = best_rational(value, cap).unwrap_or((0, 1));
    let residual = (value - p as f64 / q as f64).abs();
    if residual > RECONSTRUCTION_TOL {
        return Err(Error::ReconstructionFailure { value, p, q, residual });
    }
    let parabolic_start = states
        .first()
        .map(|s| s.comps.iter().all(|c| {
            let tr = c.m + 1.0 / c.m;
            (tr - 2.0).norm().min((tr + 2.0).norm()) < 1e-10
        }))
        .unwrap_or(false);
    Ok(Quantization { p, q, value, residual, quadrature_error: est.error, parabolic_start })
}
