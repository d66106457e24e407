use num_integer::Integer;
use serde::Serialize;

use super::{MultiPoly, Rat};
use crate::error::{Error, Result};

pub type Lattice = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub start: Lattice,
    pub end: Lattice,
    /// Primitive direction from `start` to `end`.
    pub direction: Lattice,
    /// Lattice points from `start` to `end` inclusive.
    pub points: Vec<Lattice>,
}

impl Edge {
    fn new(start: Lattice, end: Lattice) -> Edge {
        let (dx, dy) = (end.0 - start.0, end.1 - start.1);
        let g = dx.gcd(&dy).max(1);
        let direction = (dx / g, dy / g);
        let points = (0..=g).map(|k| (start.0 + k * direction.0, start.1 + k * direction.1)).collect();
        Edge { start, end, direction, points }
    }

    pub fn lattice_length(&self) -> usize {
        self.points.len() - 1
    }

    /// Inner normal for a counter-clockwise boundary.
    pub fn inner_normal(&self) -> Lattice {
        (-self.direction.1, self.direction.0)
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})-({},{})", self.start.0, self.start.1, self.end.0, self.end.1)
    }
}

/// Convex hull of the support of a bivariate polynomial, counter-clockwise.
/// The first coordinate is the exponent of `vars[0]`, the second of `vars[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub vars: [String; 2],
    pub vertices: Vec<Lattice>,
    pub edges: Vec<Edge>,
    pub support: Vec<Lattice>,
}

fn cross(o: Lattice, a: Lattice, b: Lattice) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone chain; collinear points are dropped from the vertex list.
pub fn convex_hull(points: &[Lattice]) -> Vec<Lattice> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Lattice> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Lattice> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn pair_vars(p: &MultiPoly, vars: Option<[&str; 2]>) -> Result<[String; 2]> {
    match vars {
        Some([a, b]) => {
            if p.vars().iter().any(|v| v != a && v != b) {
                return Err(Error::WrongArity(p.vars().to_vec()));
            }
            Ok([a.to_string(), b.to_string()])
        }
        None => {
            if p.vars().len() != 2 {
                return Err(Error::WrongArity(p.vars().to_vec()));
            }
            Ok([p.vars()[0].clone(), p.vars()[1].clone()])
        }
    }
}

/// Newton polygon of a polynomial in exactly two variables (sorted order).
pub fn newton_polygon(p: &MultiPoly) -> Result<NewtonPolygon> {
    newton_polygon_in(p, None)
}

/// Newton polygon with an explicit coordinate order; variables may be absent.
pub fn newton_polygon_in(p: &MultiPoly, vars: Option<[&str; 2]>) -> Result<NewtonPolygon> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("Newton polygon of zero".into()));
    }
    let vars = pair_vars(p, vars)?;
    let support: Vec<Lattice> = p
        .terms()
        .map(|(e, _)| (p.exponent_of(e, &vars[0]) as i64, p.exponent_of(e, &vars[1]) as i64))
        .collect();
    let vertices = convex_hull(&support);
    let edges = match vertices.len() {
        1 => Vec::new(),
        2 => vec![Edge::new(vertices[0], vertices[1]), Edge::new(vertices[1], vertices[0])],
        n => (0..n).map(|i| Edge::new(vertices[i], vertices[(i + 1) % n])).collect(),
    };
    let mut support = support;
    support.sort();
    Ok(NewtonPolygon { vars, vertices, edges, support })
}

impl NewtonPolygon {
    pub fn find_edge(&self, start: Lattice, end: Lattice) -> Option<&Edge> {
        self.edges.iter().find(|e| e.start == start && e.end == end)
    }

    /// Whether `q` lies in the closed polygon.
    pub fn contains(&self, q: Lattice) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == q,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                cross(a, b, q) == 0
                    && q.0 >= a.0.min(b.0)
                    && q.0 <= a.0.max(b.0)
                    && q.1 >= a.1.min(b.1)
                    && q.1 <= a.1.max(b.1)
            }
            _ => self.edges.iter().all(|e| cross(e.start, e.end, q) >= 0),
        }
    }
}

/// Coefficients of `p` along the lattice points of `edge`, as a polynomial in `t`.
pub fn edge_polynomial(p: &MultiPoly, edge: &Edge) -> Result<MultiPoly> {
    edge_polynomial_in(p, edge, None)
}

pub fn edge_polynomial_in(p: &MultiPoly, edge: &Edge, vars: Option<[&str; 2]>) -> Result<MultiPoly> {
    let poly = newton_polygon_in(p, vars)?;
    let on_polygon = poly.edges.iter().any(|e| e == edge);
    if !on_polygon {
        return Err(Error::EdgeNotOnPolygon(edge.to_string()));
    }
    let coeff = |q: Lattice| -> Rat {
        p.terms()
            .find(|(e, _)| {
                p.exponent_of(e, &poly.vars[0]) as i64 == q.0
                    && p.exponent_of(e, &poly.vars[1]) as i64 == q.1
            })
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| Rat::from_integer(0.into()))
    };
    let terms = edge.points.iter().enumerate().map(|(k, &q)| (vec![k as u32], coeff(q))).collect();
    Ok(MultiPoly::from_terms(vec!["t".to_string()], terms))
}
