//! Small numerical kernels shared by the numeric modules.

use num_complex::Complex64;

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots of Σ c_k z^k (lowest degree first) by Aberth iteration,
/// polished with Newton steps. Leading zeros are ignored.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().map(|x| x.norm() == 0.0).unwrap_or(false) {
        c.pop();
    }
    let mut zero_roots = 0;
    while c.len() > 1 && c[0].norm() == 0.0 {
        c.remove(0);
        zero_roots += 1;
    }
    let n = c.len().saturating_sub(1);
    let mut out = vec![Complex64::new(0.0, 0.0); zero_roots];
    if n == 0 {
        return out;
    }
    let lead = c[n];
    let c: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    // Cauchy bound radius for the initial circle
    let r = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let r0 = r.min(2.0 * c[..n].iter().map(|x| x.norm()).sum::<f64>().max(1e-3));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(0.5 * r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&c, *zi);
            if dp.norm() > 0.0 {
                let step = p / dp;
                if step.re.is_finite() && step.im.is_finite() {
                    *zi -= step;
                }
            }
        }
    }
    out.extend(z);
    out
}

/// Numeric 2×2 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[Complex64; 2]; 2]);

impl CMat2 {
    pub fn identity() -> CMat2 {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        CMat2([[o, z], [z, o]])
    }

    pub fn mul(&self, o: &CMat2) -> CMat2 {
        let a = &self.0;
        let b = &o.0;
        CMat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn inverse_sl2(&self) -> CMat2 {
        let a = &self.0;
        CMat2([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs_diff(&self, o: &CMat2) -> f64 {
        let mut m = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - o.0[i][j]).norm());
            }
        }
        m
    }
}
