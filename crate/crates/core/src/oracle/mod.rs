//! Independent hyperbolic-volume oracle: Lobachevsky and Bloch–Wigner
//! functions plus gluing equations for two bundled triangulations.

mod dilog;
mod gluing;

pub use dilog::{bloch_wigner, clausen2, lobachevsky};
pub use gluing::{cusp_shapes, gluing_residual, solve_gluing, CuspRows, GluingSolution, Triangulation};

use num_complex::Complex64;

/// Oracle volume with the meridian of each cusp deformed to eigenvalue
/// `exp(log_m[i])`. The holonomy of the meridian is the square of its
/// eigenvalue, so the gluing target is `2 log m`.
pub fn deformed_volume(tri: &Triangulation, log_m: &[Complex64]) -> crate::Result<f64> {
    let targets: Vec<Complex64> = log_m.iter().map(|u| 2.0 * u).collect();
    Ok(solve_gluing(tri, &targets)?.volume)
}

/// Triangulation bundled for a two-bridge code, if any. Codes are matched up
/// to the equivalences q ↔ p − q and q ↔ q⁻¹ mod p.
pub fn triangulation_for_code(p: u32, q: u32) -> Option<Triangulation> {
    let equiv = |a: u32, b: u32| {
        (0..4).any(|k| {
            let mut x = b;
            if k & 1 == 1 {
                x = p - x;
            }
            if k & 2 == 2 {
                x = (1..p).find(|y| (y * x) % p == 1).unwrap_or(0);
            }
            x == a
        })
    };
    match p {
        5 if equiv(3, q) => Some(Triangulation::figure_eight()),
        8 if equiv(3, q) => Some(Triangulation::whitehead()),
        _ => None,
    }
}
