//! Path continuation on eigenvalue curves and line integrals of the
//! regulator 1-forms η and ξ.

mod integrals;
mod path;
mod track;
mod volume;

pub use integrals::{
    eta_estimate, integrate_eta, integrate_xi, monodromy, quantization_check, require_closed, xi_estimate, Estimate,
    Quantization, DENOMINATOR_CAP, QUADRATURE_TOL, RECONSTRUCTION_TOL,
};
pub use path::{ComponentPath, PathSpec, Segment};
pub use track::{track_path, CompState, PathState, JACOBIAN_TOL, RESIDUAL_TOL, TORUS_BOUNDS};
pub use volume::{
    calibrate_epsilon, complete_volume, oracle_volume, special_cs_along, volume_along, volume_error,
    volume_profile, Calibration, SpecialCs, CALIBRATION_A,
};

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegulatorResult {
    pub eta_integral: f64,
    pub eta_error: f64,
    pub xi_integral: f64,
    pub xi_error: f64,
    pub monodromy: Option<Complex64>,
    #[serde(rename = "V")]
    pub v: Option<f64>,
    #[serde(rename = "U")]
    pub u: Option<SpecialCs>,
    pub quantization: Option<Quantization>,
}

/// CSV rows `t,l_re,l_im,m_re,m_im,eta_acc,xi_acc,V`, one block per component.
/// V is empty when no volume is available.
pub fn write_csv(states: &[PathState], vol: Option<f64>) -> String {
    let ncomp = states.first().map_or(0, |s| s.comps.len());
    let mut out = String::new();
    for i in 0..ncomp {
        if ncomp > 1 {
            let _ = writeln!(out, "# component {}", i + 1);
        }
        out.push_str("t,l_re,l_im,m_re,m_im,eta_acc,xi_acc,V\n");
        for s in states {
            let c = &s.comps[i];
            let v = vol.map_or(String::new(), |v| format!("{:.16e}", v + 2.0 * s.eta_acc));
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                s.t, c.l.re, c.l.im, c.m.re, c.m.im, s.eta_acc, s.xi_acc, v
            );
        }
    }
    out
}
