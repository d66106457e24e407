use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::integrals::{eta_estimate, integrate_eta, integrate_xi};
use super::path::PathSpec;
use super::track::{track_path, PathState};
use crate::error::{Error, Result};
use crate::oracle::{deformed_volume, triangulation_for_code, Triangulation};
use crate::repvar::EigenCurve;

/// Deformation parameter of the calibration segment m = exp(iπa).
pub const CALIBRATION_A: f64 = 0.02;
const CALIBRATION_SAMPLES: usize = 64;
const CALIBRATION_TOL: f64 = 1e-5;

fn triangulation(curve: &EigenCurve) -> Result<Triangulation> {
    let code = curve
        .code
        .ok_or_else(|| Error::NoHyperbolicSolution(format!("{}: no two-bridge code", curve.link)))?;
    triangulation_for_code(code.p, code.q)
        .ok_or_else(|| Error::NoHyperbolicSolution(format!("{}: no bundled triangulation", curve.link)))
}

/// Oracle volume with the meridian eigenvalue of this curve's component set
/// to exp(log_m) and every other cusp complete.
pub fn oracle_volume(curve: &EigenCurve, log_m: Complex64) -> Result<f64> {
    let tri = triangulation(curve)?;
    let mut targets = vec![Complex64::new(0.0, 0.0); tri.cusps.len()];
    let slot = targets
        .get_mut(curve.component - 1)
        .ok_or_else(|| Error::InvalidSlice(format!("component {} has no cusp", curve.component)))?;
    *slot = log_m;
    deformed_volume(&tri, &targets)
}

pub fn complete_volume(curve: &EigenCurve) -> Result<f64> {
    oracle_volume(curve, Complex64::new(0.0, 0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Calibration {
    pub epsilon: i8,
    pub a: f64,
    pub vol: f64,
    pub eta: f64,
    pub oracle: f64,
    pub residual: f64,
}

/// Fix ε by matching Vol + 2ε∫η against the oracle on m = exp(iπ·0.02·t).
pub fn calibrate_epsilon(curve: &EigenCurve) -> Result<Calibration> {
    let vol = complete_volume(curve)?;
    let end = Complex64::new(0.0, PI * CALIBRATION_A);
    let mut unit = curve.clone();
    unit.epsilon = 1;
    let spec = PathSpec::exp_segment(Complex64::new(0.0, 0.0), end, CALIBRATION_SAMPLES);
    let states = track_path(std::slice::from_ref(&unit), &spec, &PathState::at_basepoint(std::slice::from_ref(&unit))?)?;
    let eta = integrate_eta(&states, &[1.0])?;
    let oracle = oracle_volume(curve, end)?;
    let (epsilon, residual) = [1i8, -1]
        .into_iter()
        .map(|e| (e, (vol + 2.0 * e as f64 * eta - oracle).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if residual > CALIBRATION_TOL || eta.abs() < 1e-8 {
        return Err(Error::InconsistentFamily(format!(
            "volume calibration failed: Vol {vol}, ∫η {eta}, oracle {oracle}, best residual {residual:.3e}"
        )));
    }
    Ok(Calibration { epsilon, a: CALIBRATION_A, vol, eta, oracle, residual })
}

/// V(γ(1)) = Vol(L) + 2Σε∫η for a path starting at the complete structure.
pub fn volume_along(states: &[PathState], eps: &[f64], vol: f64) -> Result<f64> {
    if states.len() < 2 {
        return Ok(vol);
    }
    Ok(vol + 2.0 * integrate_eta(states, eps)?)
}

/// V at every grid point from the running sums, for CSV output.
pub fn volume_profile(states: &[PathState], vol: f64) -> Vec<f64> {
    states.iter().map(|s| vol + 2.0 * s.eta_acc).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialCs {
    pub u: f64,
    pub cs: f64,
    /// CS(L) was not supplied and taken as 0
    pub uncalibrated: bool,
}

/// U(γ(1)) = 4π²CS(L) + q·Σε∫(log|m| d log|l| + arg l d arg m) = 4π²CS(L) − q∫ξ.
pub fn special_cs_along(states: &[PathState], eps: &[f64], q: u64, cs: Option<f64>) -> Result<SpecialCs> {
    let xi = if states.len() < 2 { 0.0 } else { integrate_xi(states, eps)? };
    let c = cs.unwrap_or(0.0);
    Ok(SpecialCs { u: 4.0 * PI * PI * c - q as f64 * xi, cs: c, uncalibrated: cs.is_none() })
}

/// η error estimate exposed for callers that want to report it.
pub fn volume_error(states: &[PathState], eps: &[f64]) -> Result<f64> {
    if states.len() < 2 {
        return Ok(0.0);
    }
    Ok(2.0 * eta_estimate(states, eps)?.error)
}
