use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Deserialize;

use super::dilog::bloch_wigner;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Deserialize)]
pub struct CuspRows {
    pub meridian: Vec<i64>,
    pub longitude: Vec<i64>,
}

/// Ideal triangulation with integer gluing data in log-shape variables.
#[derive(Clone, Debug, Deserialize)]
pub struct Triangulation {
    pub name: String,
    pub tetrahedra: usize,
    pub edges: Vec<Vec<i64>>,
    pub cusps: Vec<CuspRows>,
    /// Complete-structure shapes as (re, im).
    pub seed: Vec<[f64; 2]>,
}

const FIGURE_EIGHT: &str = include_str!("../../data/figure_eight.toml");
const WHITEHEAD: &str = include_str!("../../data/whitehead.toml");

impl Triangulation {
    pub fn from_toml(text: &str) -> Result<Triangulation> {
        let t: Triangulation = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn figure_eight() -> Triangulation {
        Self::from_toml(FIGURE_EIGHT).expect("bundled data")
    }

    pub fn whitehead() -> Triangulation {
        Self::from_toml(WHITEHEAD).expect("bundled data")
    }

    pub fn by_name(name: &str) -> Option<Triangulation> {
        match name {
            "figure-eight" => Some(Self::figure_eight()),
            "whitehead" => Some(Self::whitehead()),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.tetrahedra;
        let bad = |msg: String| Err(Error::Parse(format!("triangulation {}: {msg}", self.name)));
        if self.edges.len() != n {
            return bad(format!("{} edge equations for {n} tetrahedra", self.edges.len()));
        }
        if self.seed.len() != n {
            return bad("seed length".into());
        }
        let rows = self.edges.iter().chain(self.cusps.iter().flat_map(|c| [&c.meridian, &c.longitude]));
        for r in rows {
            if r.len() != 3 * n {
                return bad("row length".into());
            }
        }
        // every tetrahedron contributes each dihedral pair twice around the edges
        for j in 0..n {
            for k in 0..3 {
                let s: i64 = self.edges.iter().map(|r| r[3 * j + k]).sum();
                if s != 2 {
                    return bad(format!("tetrahedron {j} column {k} sums to {s}"));
                }
            }
        }
        Ok(())
    }

    pub fn seed_shapes(&self) -> Vec<Complex64> {
        self.seed.iter().map(|[a, b]| Complex64::new(*a, *b)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct GluingSolution {
    pub shapes: Vec<Complex64>,
    pub volume: f64,
    /// Max residual over edge and meridian equations.
    pub residual: f64,
    pub iterations: usize,
}

fn row_value(row: &[i64], shapes: &[Complex64]) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &z) in shapes.iter().enumerate() {
        let (a, b, c) = (row[3 * j] as f64, row[3 * j + 1] as f64, row[3 * j + 2] as f64);
        acc += a * z.ln() - b * (one - z).ln() + c * (one - one / z).ln();
    }
    acc
}

fn row_gradient(row: &[i64], shapes: &[Complex64]) -> Vec<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    shapes
        .iter()
        .enumerate()
        .map(|(j, &z)| {
            let (a, b, c) = (row[3 * j] as f64, row[3 * j + 1] as f64, row[3 * j + 2] as f64);
            a / z + b / (one - z) + c / (z * (z - one))
        })
        .collect()
}

fn system(tri: &Triangulation, targets: &[Complex64]) -> Vec<(Vec<i64>, Complex64)> {
    let mut rows: Vec<(Vec<i64>, Complex64)> =
        tri.edges.iter().map(|r| (r.clone(), Complex64::new(0.0, 2.0 * PI))).collect();
    for (c, t) in tri.cusps.iter().zip(targets) {
        rows.push((c.meridian.clone(), *t));
    }
    rows
}

fn residuals(rows: &[(Vec<i64>, Complex64)], z: &[Complex64]) -> Vec<Complex64> {
    rows.iter().map(|(r, t)| row_value(r, z) - t).collect()
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Solve the edge equations together with prescribed meridian log-holonomies,
/// by damped Gauss–Newton from the complete structure.
pub fn solve_gluing(tri: &Triangulation, meridian_targets: &[Complex64]) -> Result<GluingSolution> {
    if meridian_targets.len() != tri.cusps.len() {
        return Err(Error::GluingDivergence(format!(
            "{} targets for {} cusps",
            meridian_targets.len(),
            tri.cusps.len()
        )));
    }
    let rows = system(tri, meridian_targets);
    let n = tri.tetrahedra;
    let mut z = tri.seed_shapes();
    let mut res = residuals(&rows, &z);
    let mut iterations = 0;
    while max_norm(&res) > 1e-14 && iterations < 100 {
        iterations += 1;
        let j = DMatrix::from_fn(rows.len(), n, |i, k| row_gradient(&rows[i].0, &z)[k]);
        let b = DVector::from_iterator(rows.len(), res.iter().map(|r| -r));
        let step = j
            .svd(true, true)
            .solve(&b, 1e-12)
            .map_err(|e| Error::GluingDivergence(e.to_string()))?;
        let before = max_norm(&res);
        let mut lambda = 1.0;
        loop {
            let trial: Vec<Complex64> = z.iter().zip(step.iter()).map(|(a, d)| a + d * lambda).collect();
            let ok = trial.iter().all(|w| w.im > 0.0 && w.norm() > 1e-12 && (w - 1.0).norm() > 1e-12);
            if ok {
                let r = residuals(&rows, &trial);
                if max_norm(&r) < before || lambda < 1e-3 {
                    z = trial;
                    res = r;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-6 {
                return Err(Error::GluingDivergence(format!(
                    "line search failed at residual {before:.3e}"
                )));
            }
        }
    }
    let residual = max_norm(&res);
    if residual > 1e-10 {
        return Err(Error::GluingDivergence(format!("residual {residual:.3e} after {iterations} steps")));
    }
    let volume = z.iter().map(|&w| bloch_wigner(w)).sum::<Result<f64>>()?;
    Ok(GluingSolution { shapes: z, volume, residual, iterations })
}

/// Cusp shapes d(longitude)/d(meridian) at a solution, with the other
/// meridians held fixed.
pub fn cusp_shapes(tri: &Triangulation, sol: &GluingSolution) -> Result<Vec<Complex64>> {
    let n = tri.tetrahedra;
    let z = &sol.shapes;
    let mut grads: Vec<Vec<Complex64>> = tri.edges.iter().map(|r| row_gradient(r, z)).collect();
    let mer: Vec<Vec<Complex64>> = tri.cusps.iter().map(|c| row_gradient(&c.meridian, z)).collect();
    grads.extend(mer.iter().cloned());
    let j = DMatrix::from_fn(grads.len(), n, |i, k| grads[i][k]);
    let svd = j.svd(true, true);
    let mut out = Vec::new();
    for (c, cusp) in tri.cusps.iter().enumerate() {
        let mut rhs = DVector::from_element(grads.len(), Complex64::new(0.0, 0.0));
        rhs[tri.edges.len() + c] = Complex64::new(1.0, 0.0);
        let dz = svd.solve(&rhs, 1e-12).map_err(|e| Error::GluingDivergence(e.to_string()))?;
        let gl = row_gradient(&cusp.longitude, z);
        out.push(gl.iter().zip(dz.iter()).map(|(a, b)| a * b).sum());
    }
    Ok(out)
}

/// Edge and meridian residuals of arbitrary shapes (for tests and reports).
pub fn gluing_residual(tri: &Triangulation, shapes: &[Complex64], targets: &[Complex64]) -> f64 {
    max_norm(&residuals(&system(tri, targets), shapes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_structures() {
        let f8 = Triangulation::figure_eight();
        let s = solve_gluing(&f8, &[Complex64::new(0.0, 0.0)]).unwrap();
        assert!((s.volume - 2.029_883_212_819_307).abs() < 1e-12);
        let tau = cusp_shapes(&f8, &s).unwrap();
        assert!((tau[0] - Complex64::new(0.0, -(12f64.sqrt()))).norm() < 1e-9, "{tau:?}");

        let wh = Triangulation::whitehead();
        let zero = Complex64::new(0.0, 0.0);
        let s = solve_gluing(&wh, &[zero, zero]).unwrap();
        assert!((s.volume - 3.663_862_376_708_876).abs() < 1e-12);
        let tau = cusp_shapes(&wh, &s).unwrap();
        for t in tau {
            assert!((t - Complex64::new(2.0, -2.0)).norm() < 1e-9, "{t}");
        }
    }

    #[test]
    fn deformation_decreases_volume() {
        let f8 = Triangulation::figure_eight();
        let s = solve_gluing(&f8, &[Complex64::new(0.0, 2.0 * PI * 0.04)]).unwrap();
        assert!(s.residual < 1e-12);
        assert!(s.volume < 2.029_883_3);
    }
}
