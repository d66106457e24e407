use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type C = [f64; 2];

fn c(z: C) -> Complex64 {
    Complex64::new(z[0], z[1])
}

/// One piece of a meridian path. `exp` and `polyline` live in the log-m chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    /// m = exp(u0 + s (u1 − u0))
    Exp { u0: C, u1: C },
    /// m = center + radius·e^{iθ}, θ from theta0 to theta1 (radians)
    Circle { center: C, radius: f64, theta0: f64, theta1: f64 },
    /// piecewise-linear in log m through the given points
    Polyline { points: Vec<C> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentPath {
    pub segments: Vec<Segment>,
}

/// Meridian paths for every tracked component, sharing one grid on t ∈ [0, 1].
/// `samples` is the total number of grid intervals; each (expanded) segment
/// gets an equal share, which must be even so that Richardson halving keeps
/// the corners on the coarse grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub components: Vec<ComponentPath>,
    pub samples: usize,
    #[serde(default)]
    pub closed: bool,
}

/// Smooth piece in parametric form, s ∈ [0, 1].
#[derive(Clone, Copy, Debug)]
pub(crate) enum Piece {
    Exp(Complex64, Complex64),
    Circle(Complex64, f64, f64, f64),
}

impl Piece {
    pub(crate) fn at(&self, s: f64) -> Complex64 {
        match *self {
            Piece::Exp(u0, u1) => (u0 + (u1 - u0) * s).exp(),
            Piece::Circle(c, r, a, b) => c + Complex64::from_polar(r, a + s * (b - a)),
        }
    }
}

impl ComponentPath {
    pub(crate) fn pieces(&self) -> Vec<Piece> {
        let mut out = Vec::new();
        for s in &self.segments {
            match s {
                Segment::Exp { u0, u1 } => out.push(Piece::Exp(c(*u0), c(*u1))),
                Segment::Circle { center, radius, theta0, theta1 } => {
                    out.push(Piece::Circle(c(*center), *radius, *theta0, *theta1))
                }
                Segment::Polyline { points } => {
                    for w in points.windows(2) {
                        out.push(Piece::Exp(c(w[0]), c(w[1])));
                    }
                }
            }
        }
        out
    }
}

impl PathSpec {
    pub fn from_json(text: &str) -> Result<PathSpec> {
        let spec: PathSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Single-component exponential segment m = exp(u0 + t(u1 − u0)).
    pub fn exp_segment(u0: Complex64, u1: Complex64, samples: usize) -> PathSpec {
        PathSpec {
            components: vec![ComponentPath { segments: vec![Segment::Exp { u0: [u0.re, u0.im], u1: [u1.re, u1.im] }] }],
            samples,
            closed: false,
        }
    }

    /// Single-component polyline in the log-m chart.
    pub fn log_polyline(points: &[Complex64], samples: usize, closed: bool) -> PathSpec {
        PathSpec {
            components: vec![ComponentPath { segments: vec![Segment::Polyline { points: points.iter().map(|z| [z.re, z.im]).collect() }] }],
            samples,
            closed,
        }
    }

    /// Full circle |m| = radius traversed `turns` times from m = radius.
    pub fn circle(radius: f64, turns: i32, samples: usize) -> PathSpec {
        PathSpec {
            components: vec![ComponentPath {
                segments: vec![Segment::Circle {
                    center: [0.0, 0.0],
                    radius,
                    theta0: 0.0,
                    theta1: 2.0 * PI * turns as f64,
                }],
            }],
            samples,
            closed: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidPath("no components".into()));
        }
        for (i, comp) in self.components.iter().enumerate() {
            let pieces = comp.pieces();
            if pieces.is_empty() {
                return Err(Error::InvalidPath(format!("component {} has no segments", i + 1)));
            }
            let share = self.samples / pieces.len();
            if self.samples == 0 || share * pieces.len() != self.samples || !share.is_multiple_of(2) {
                return Err(Error::InvalidPath(format!(
                    "samples = {} must be a positive multiple of 2 × {} segments",
                    self.samples,
                    pieces.len()
                )));
            }
            for (k, p) in pieces.iter().enumerate() {
                if let Piece::Circle(c, r, ..) = p {
                    if !(*r > 0.0) || (c.norm() - r).abs() < 1e-12 {
                        return Err(Error::InvalidPath(format!("circle segment {} passes through m = 0", k + 1)));
                    }
                }
            }
            for (k, w) in pieces.windows(2).enumerate() {
                if (w[0].at(1.0) - w[1].at(0.0)).norm() > 1e-12 {
                    return Err(Error::InvalidPath(format!("segments {} and {} do not meet", k + 1, k + 2)));
                }
            }
            if self.closed {
                let gap = (pieces[0].at(0.0) - pieces[pieces.len() - 1].at(1.0)).norm();
                if gap > 1e-12 {
                    return Err(Error::InvalidPath(format!("closed path has endpoint gap {gap:.3e}")));
                }
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..=self.samples).map(|k| k as f64 / self.samples as f64).collect()
    }

    /// m_i(t) for component i.
    pub fn meridian(&self, i: usize, t: f64) -> Complex64 {
        let pieces = self.components[i].pieces();
        let (k, s) = locate(pieces.len(), t);
        pieces[k].at(s)
    }
}

/// Piece index and local parameter of t; grid corners map to s = 0 of the
/// next piece except at t = 1.
pub(crate) fn locate(n: usize, t: f64) -> (usize, f64) {
    let x = t.clamp(0.0, 1.0) * n as f64;
    let k = (x.floor() as usize).min(n - 1);
    (k, x - k as f64)
}
