use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::code::TwoBridgeCode;
use super::curve::{Basepoint, EigenCurve, L, M};
use crate::error::{Error, Result};
use crate::poly::newton_polygon_in;

/// Link input file, e.g. `{ "type": "two_bridge", "p": 5, "q": 3, "name": "figure-eight" }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LinkInput {
    TwoBridge {
        p: u32,
        q: u32,
        #[serde(default)]
        name: Option<String>,
    },
}

impl LinkInput {
    pub fn from_json(text: &str) -> Result<LinkInput> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn code(&self) -> Result<TwoBridgeCode> {
        match self {
            LinkInput::TwoBridge { p, q, .. } => TwoBridgeCode::new(*p, *q),
        }
    }

    pub fn name(&self) -> String {
        match self {
            LinkInput::TwoBridge { p, q, name } => name.clone().unwrap_or_else(|| format!("two-bridge {p}/{q}")),
        }
    }
}

fn pair(z: Complex64) -> String {
    format!("{} {}", z.re, z.im)
}

/// Text export: `key: value` metadata lines followed by the polynomial.
pub fn write_curve(c: &EigenCurve) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "link: {}", c.link);
    if let Some(code) = &c.code {
        let _ = writeln!(s, "code: {} {}", code.p, code.q);
    }
    let _ = writeln!(s, "component: {}", c.component);
    let signs: Vec<String> = c.slice_signs.iter().map(|x| format!("{x:+}")).collect();
    let _ = writeln!(s, "slice_signs: {}", signs.join(" "));
    let _ = writeln!(s, "epsilon: {:+}", c.epsilon);
    if let Some(b) = &c.basepoint {
        let _ = writeln!(s, "basepoint: {} {}", pair(b.l), pair(b.m));
        let _ = writeln!(s, "riley_root: {}", pair(b.u));
        let _ = writeln!(s, "cusp_shape: {}", pair(b.cusp_shape));
        let _ = writeln!(s, "branch_slope: {}", pair(b.branch_slope));
    }
    if let Ok(np) = newton_polygon_in(&c.poly, Some([L, M])) {
        let v: Vec<String> = np.vertices.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let _ = writeln!(s, "newton_polygon: {} vertices {}", v.len(), v.join(" "));
    }
    let _ = writeln!(s, "poly: {}", c.poly);
    s
}

fn floats(v: &str, n: usize, key: &str) -> Result<Vec<f64>> {
    let xs: Vec<f64> = v
        .split_whitespace()
        .map(|t| t.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("{key}: {e}")))?;
    if xs.len() != n {
        return Err(Error::Parse(format!("{key}: expected {n} numbers")));
    }
    Ok(xs)
}

fn complex(v: &str, key: &str) -> Result<Complex64> {
    let x = floats(v, 2, key)?;
    Ok(Complex64::new(x[0], x[1]))
}

fn sign(t: &str) -> Result<i8> {
    match t {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        _ => Err(Error::Parse(format!("bad sign {t:?}"))),
    }
}

pub fn read_curve(text: &str) -> Result<EigenCurve> {
    let mut link = None;
    let mut code = None;
    let mut component = 1;
    let mut slice_signs = Vec::new();
    let mut epsilon = 1;
    let mut poly = None;
    let (mut lm, mut u, mut tau, mut slope) = (None, None, None, None);
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once(':').ok_or_else(|| Error::Parse(format!("expected key: value, got {line:?}")))?;
        let v = v.trim();
        match k.trim() {
            "link" => link = Some(v.to_string()),
            "code" => {
                let x: Vec<u32> = v
                    .split_whitespace()
                    .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("code: {e}"))))
                    .collect::<Result<_>>()?;
                if x.len() != 2 {
                    return Err(Error::Parse("code: expected p q".into()));
                }
                code = Some(TwoBridgeCode::new(x[0], x[1])?);
            }
            "component" => component = v.parse().map_err(|_| Error::Parse(format!("component: {v:?}")))?,
            "slice_signs" => slice_signs = v.split_whitespace().map(sign).collect::<Result<_>>()?,
            "epsilon" => epsilon = sign(v)?,
            "basepoint" => lm = Some(floats(v, 4, "basepoint")?),
            "riley_root" => u = Some(complex(v, k)?),
            "cusp_shape" => tau = Some(complex(v, k)?),
            "branch_slope" => slope = Some(complex(v, k)?),
            "newton_polygon" => {}
            "poly" => poly = Some(v.parse()?),
            other => return Err(Error::Parse(format!("unknown key {other:?}"))),
        }
    }
    let poly = poly.ok_or_else(|| Error::Parse("missing poly".into()))?;
    let zero = Complex64::new(0.0, 0.0);
    let basepoint = lm.map(|x| Basepoint {
        l: Complex64::new(x[0], x[1]),
        m: Complex64::new(x[2], x[3]),
        u: u.unwrap_or(zero),
        cusp_shape: tau.unwrap_or(zero),
        branch_slope: slope.unwrap_or(zero),
    });
    Ok(EigenCurve {
        link: link.unwrap_or_default(),
        code,
        component,
        poly,
        slice_signs,
        epsilon,
        basepoint,
    })
}
