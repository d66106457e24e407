use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::code::TwoBridgeCode;
use super::family::{riley_polynomial, RepFamily, U};
use crate::error::{Error, Result};
use crate::oracle::{cusp_shapes, solve_gluing, triangulation_for_code};
use crate::poly::gcd::content_in;
use crate::poly::{resultant, squarefree_part, MultiPoly, Rat, RatFn};

pub const L: &str = "l";
pub const M: &str = "m";

/// Eigenvalues of the discrete faithful representation on one component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Basepoint {
    pub l: Complex64,
    pub m: Complex64,
    /// Riley parameter of the chosen representation.
    pub u: Complex64,
    /// Longitude translation relative to the meridian translation.
    pub cusp_shape: Complex64,
    /// dl/dm along the branch of the representation curve through the
    /// basepoint; needed because the eigenvalue curve may be singular there.
    pub branch_slope: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenCurve {
    pub link: String,
    pub code: Option<TwoBridgeCode>,
    /// 1-based component index.
    pub component: usize,
    /// Squarefree polynomial in (l, m).
    pub poly: MultiPoly,
    /// Eigenvalue (±1) fixed on each other component, in component order.
    pub slice_signs: Vec<i8>,
    pub epsilon: i8,
    /// None for non-hyperbolic links.
    pub basepoint: Option<Basepoint>,
}

impl EigenCurve {
    /// Relative residual |A(l, m)| / Σ|c||l|^i|m|^j.
    pub fn residual(&self, l: Complex64, m: Complex64) -> f64 {
        let b = [(L, l), (M, m)];
        let s = self.poly.abs_scale(&b);
        if s == 0.0 {
            return 0.0;
        }
        self.poly.eval_complex(&b).norm() / s
    }
}

fn check_slice(fam: &RepFamily, i: usize, signs: &[i8]) -> Result<()> {
    let n = fam.components();
    if i == 0 || i > n {
        return Err(Error::InvalidSlice(format!("component {i} out of range 1..={n}")));
    }
    if signs.len() != n - 1 {
        return Err(Error::InvalidSlice(format!("expected {} slice signs, got {}", n - 1, signs.len())));
    }
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidSlice(format!("slice signs must be ±1: {signs:?}")));
    }
    Ok(())
}

/// Meridian values with component i free: the others fixed to their slice signs.
fn slice_bindings(fam: &RepFamily, i: usize, signs: &[i8]) -> Vec<(String, i8)> {
    let mut it = signs.iter();
    (1..=fam.components())
        .filter(|&j| j != i)
        .map(|j| (fam.meridian_vars[j - 1].clone(), *it.next().unwrap()))
        .collect()
}

struct Sliced {
    riley: MultiPoly,
    /// Longitude eigenvalue as a function of (m_i, u).
    l: RatFn,
    m_var: String,
}

fn slice(fam: &RepFamily, riley: &MultiPoly, i: usize, signs: &[i8]) -> Sliced {
    let lm = fam.longitude_matrix(i);
    let mut l = if i == 1 { lm.get(0, 0).clone() } else { lm.get(1, 1).recip() };
    let mut r = riley.clone();
    for (v, s) in slice_bindings(fam, i, signs) {
        let val = Rat::from_integer((s as i64).into());
        r = r.eval(&v, &val);
        l = l.eval(&v, &val);
    }
    Sliced { riley: r, l, m_var: fam.meridian_vars[i - 1].clone() }
}

fn numeric_meridians(fam: &RepFamily, i: usize, signs: &[i8], mi: Complex64) -> Vec<Complex64> {
    let mut it = signs.iter();
    (1..=fam.components())
        .map(|j| if j == i { mi } else { Complex64::new(*it.next().unwrap() as f64, 0.0) })
        .collect()
}

/// Numeric longitude eigenvalue and cusp-shape ratio of component i.
fn longitude_data(fam: &RepFamily, i: usize, ms: &[Complex64], u: Complex64) -> (Complex64, Complex64) {
    let lm = fam.numeric_word(&fam.presentation.longitudes[i - 1], ms, u).0;
    if i == 1 {
        (lm[0][0], lm[0][1] / lm[0][0])
    } else {
        (1.0 / lm[1][1], lm[1][0] / lm[0][0] / u)
    }
}

/// Discrete faithful eigenvalues on component i. Candidates are the nonreal
/// roots of the parabolic Riley polynomial; when a bundled triangulation is
/// available the one whose cusp shape matches the oracle (in modulus and
/// orientation) is chosen, otherwise the root in the upper half plane with
/// largest imaginary part.
pub fn basepoint(fam: &RepFamily, i: usize, slice_signs: &[i8]) -> Result<Basepoint> {
    check_slice(fam, i, slice_signs)?;
    let riley = riley_polynomial(fam)?;
    basepoint_with(fam, &riley, i, slice_signs)
}

fn basepoint_with(fam: &RepFamily, riley: &MultiPoly, i: usize, signs: &[i8]) -> Result<Basepoint> {
    let one = Complex64::new(1.0, 0.0);
    let ms = numeric_meridians(fam, i, signs, one);
    let cands: Vec<Complex64> = fam
        .solve_u(riley, &ms)
        .into_iter()
        .filter(|u| u.norm() > 1e-8 && u.im.abs() > 1e-8 * (1.0 + u.norm()))
        .collect();
    if cands.is_empty() {
        return Err(Error::NoHyperbolicSolution(format!(
            "every parabolic representation of {:?} is real",
            fam.code()
        )));
    }
    let code = fam.code();
    let u = match triangulation_for_code(code.p, code.q) {
        Some(tri) => {
            let zero = vec![Complex64::new(0.0, 0.0); tri.cusps.len()];
            let sol = solve_gluing(&tri, &zero)?;
            let tau = cusp_shapes(&tri, &sol)?[(i - 1).min(tri.cusps.len() - 1)];
            let score = |u: &Complex64| {
                let (_, t) = longitude_data(fam, i, &ms, *u);
                let orient = if t.im.signum() == tau.im.signum() { 0.0 } else { 1.0 };
                (t.norm() - tau.norm()).abs() + orient
            };
            let best = cands
                .iter()
                .copied()
                .min_by(|a, b| score(a).total_cmp(&score(b)))
                .unwrap();
            if score(&best) > 1e-6 {
                return Err(Error::NoHyperbolicSolution(format!(
                    "no parabolic representation matches the oracle cusp shape {tau}"
                )));
            }
            best
        }
        None => cands
            .iter()
            .copied()
            .filter(|u| u.im > 0.0)
            .max_by(|a, b| a.im.total_cmp(&b.im))
            .unwrap(),
    };
    let (l, cusp_shape) = longitude_data(fam, i, &ms, u);
    let sl = slice(fam, riley, i, signs);
    let bind = [(sl.m_var.as_str(), one), (U, u)];
    let ru = sl.riley.derivative(U).eval_complex(&bind);
    let rm = sl.riley.derivative(&sl.m_var).eval_complex(&bind);
    let branch_slope =
        sl.l.derivative(&sl.m_var).eval_complex(&bind) - sl.l.derivative(U).eval_complex(&bind) * rm / ru;
    Ok(Basepoint { l, m: one, u, cusp_shape, branch_slope })
}

/// Strip monomial factors and factors in a single variable, then take the
/// squarefree part.
fn geometric_part(p: &MultiPoly) -> MultiPoly {
    let (_, mut p) = p.split_monomial_content();
    for v in [L, M] {
        if p.has_var(v) {
            let c = content_in(&p, v);
            if !c.is_constant() {
                p = p.div_exact(&c).expect("content divides");
            }
        }
    }
    squarefree_part(&p).primitive_integer()
}

/// Eliminate u from the sliced Riley polynomial and the longitude eigenvalue
/// equation, keeping the part through the basepoint.
pub fn eigen_curve(fam: &RepFamily, i: usize, slice_signs: &[i8]) -> Result<EigenCurve> {
    check_slice(fam, i, slice_signs)?;
    let riley = riley_polynomial(fam)?;
    fam.check_longitudes(&riley)?;
    let sl = slice(fam, &riley, i, slice_signs);
    let lv = MultiPoly::var(L);
    let eq = &(&lv * sl.l.den()) - sl.l.num();
    let res = resultant(&sl.riley, &eq, U)?;
    if res.is_zero() {
        return Err(Error::EliminationCollapse(format!("resultant vanishes identically on component {i}")));
    }
    let poly = geometric_part(&res.rename(&sl.m_var, M));
    if !(poly.has_var(L) && poly.has_var(M)) {
        return Err(Error::EliminationCollapse(format!("eliminant {poly} does not involve both l and m")));
    }
    let bp = match basepoint_with(fam, &riley, i, slice_signs) {
        Ok(b) => Some(b),
        Err(Error::NoHyperbolicSolution(_)) => None,
        Err(e) => return Err(e),
    };
    let code = fam.code();
    let curve = EigenCurve {
        link: format!("two-bridge {}/{}", code.p, code.q),
        code: Some(code),
        component: i,
        poly,
        slice_signs: slice_signs.to_vec(),
        epsilon: 1,
        basepoint: bp,
    };
    if let Some(b) = &curve.basepoint {
        let r = curve.residual(b.l, b.m);
        if r > 1e-10 {
            return Err(Error::NoGeometricFactor { residual: r });
        }
    }
    Ok(curve)
}

/// A representation solved numerically from the Riley polynomial, with its
/// longitude eigenvalue read off the matrix product.
#[derive(Clone, Debug)]
pub struct SolvedRep {
    pub meridians: Vec<Complex64>,
    pub u: Complex64,
    pub l: Complex64,
    pub m: Complex64,
    /// Max |[λ, μ]| entry, commutator of longitude and meridian.
    pub commutator: f64,
    /// Traces of meridian and longitude on every other component.
    pub other_traces: Vec<Complex64>,
}

/// `n` solved representations of the slice at random meridian eigenvalues
/// m = r e^{iθ}, r ∈ [0.7, 1.4].
pub fn solved_points<R: Rng>(
    fam: &RepFamily,
    i: usize,
    slice_signs: &[i8],
    n: usize,
    rng: &mut R,
) -> Result<Vec<SolvedRep>> {
    check_slice(fam, i, slice_signs)?;
    let riley = riley_polynomial(fam)?;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let m = Complex64::from_polar(rng.gen_range(0.7..1.4), rng.gen_range(-3.0..3.0));
        let ms = numeric_meridians(fam, i, slice_signs, m);
        // reducible representations (tr[a, b] = 2) are skipped
        let roots: Vec<Complex64> = fam
            .solve_u(&riley, &ms)
            .into_iter()
            .filter(|&u| {
                let (a, b) = fam.numeric_generators(&ms, u);
                let c = a.mul(&b).mul(&a.inverse_sl2()).mul(&b.inverse_sl2());
                (c.trace() - 2.0).norm() > 1e-9
            })
            .collect();
        if roots.is_empty() {
            return Err(Error::InconsistentFamily("no irreducible representation on the slice".into()));
        }
        let u = roots[rng.gen_range(0..roots.len())];
        let (l, _) = longitude_data(fam, i, &ms, u);
        let (a, b) = fam.numeric_generators(&ms, u);
        let word = |j: usize| fam.numeric_word(&fam.presentation.longitudes[j - 1], &ms, u);
        let mer = |j: usize| if j == 1 { a } else { b };
        let lam = word(i);
        let commutator = lam.mul(&mer(i)).max_abs_diff(&mer(i).mul(&lam));
        let other_traces = (1..=fam.components())
            .filter(|&j| j != i)
            .flat_map(|j| [mer(j).trace(), word(j).trace()])
            .collect();
        out.push(SolvedRep { meridians: ms, u, l, m, commutator, other_traces });
    }
    Ok(out)
}
