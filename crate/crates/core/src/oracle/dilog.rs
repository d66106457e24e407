use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// ζ(2k) for k ≥ 1.
fn zeta_even(k: usize) -> f64 {
    match k {
        1 => PI.powi(2) / 6.0,
        2 => PI.powi(4) / 90.0,
        3 => PI.powi(6) / 945.0,
        4 => PI.powi(8) / 9450.0,
        _ => (1..200).map(|n| (n as f64).powi(-(2 * k as i32))).sum(),
    }
}

/// Clausen function Cl₂(θ) for θ ∈ [−π, π]:
/// θ − θ log|θ| + Σ ζ(2k) θ^{2k+1} / (k (2k+1) (2π)^{2k}).
fn clausen_reduced(theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let r = theta / (2.0 * PI);
    let r2 = r * r;
    let mut pw = r2;
    let mut acc = 0.0;
    for k in 1..60 {
        let term = zeta_even(k) * pw / ((k * (2 * k + 1)) as f64);
        acc += term;
        if term.abs() < 1e-18 {
            break;
        }
        pw *= r2;
    }
    theta - theta * theta.abs().ln() + theta * acc
}

/// Cl₂(θ) = Σ sin(nθ)/n², 2π-periodic.
pub fn clausen2(theta: f64) -> f64 {
    let t = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    clausen_reduced(t)
}

/// Lobachevsky function Λ(θ) = −∫₀^θ log|2 sin t| dt = ½ Cl₂(2θ).
pub fn lobachevsky(theta: f64) -> f64 {
    0.5 * clausen2(2.0 * theta)
}

/// Li₂(z) for |z| ≤ 1, Re z ≤ ½ through the Bernoulli series in w = −log(1−z).
fn li2_reduced(z: Complex64) -> Complex64 {
    let w = -(Complex64::new(1.0, 0.0) - z).ln();
    // B0 and B1 terms, then B_{2k}/(2k+1)! = (−1)^{k+1} 2ζ(2k)/((2k+1)(2π)^{2k})
    let mut acc = w - w * w / 4.0;
    let w2 = w * w;
    let scale = 1.0 / (4.0 * PI * PI);
    let mut wp = w * w2;
    let mut sp = scale;
    for k in 1..80 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let c = sign * 2.0 * zeta_even(k) * sp / ((2 * k + 1) as f64);
        let term = wp * c;
        acc += term;
        if term.norm() < 1e-18 {
            break;
        }
        wp *= w2;
        sp *= scale;
    }
    acc
}

/// Bloch–Wigner dilogarithm D(z) = Im Li₂(z) + arg(1−z) log|z|.
pub fn bloch_wigner(z: Complex64) -> Result<f64> {
    if z.norm() < 1e-300 || (z - 1.0).norm() < 1e-300 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::SingularInput(format!("{z}")));
    }
    let mut sign = 1.0;
    let mut w = z;
    if w.norm() > 1.0 {
        w = 1.0 / w;
        sign = -sign;
    }
    if w.re > 0.5 {
        w = Complex64::new(1.0, 0.0) - w;
        sign = -sign;
    }
    let li = li2_reduced(w);
    let d = li.im + (Complex64::new(1.0, 0.0) - w).arg() * w.norm().ln();
    Ok(sign * d)
}
