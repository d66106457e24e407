use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use super::place::{edge_places, tame_symbol, Place};
use super::symbol::FormalSymbol;
use crate::error::{Error, Result};
use crate::poly::{edge_polynomial_in, is_cyclotomic_product, newton_polygon_in};
use crate::repvar::{EigenCurve, L, M};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeCertificate {
    pub edge: String,
    pub edge_polynomial: String,
    pub cyclotomic_indices: Vec<(u64, u32)>,
    pub failure_factor: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TemperCertificate {
    pub tempered: bool,
    pub edges: Vec<EdgeCertificate>,
}

impl fmt::Display for TemperCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tempered: {}", self.tempered)?;
        for e in &self.edges {
            write!(f, "edge {}: {}: ", e.edge, e.edge_polynomial)?;
            match &e.failure_factor {
                Some(g) => writeln!(f, "failure {g}")?,
                None => {
                    let idx: Vec<String> = e
                        .cyclotomic_indices
                        .iter()
                        .map(|(n, k)| if *k == 1 { format!("Phi_{n}") } else { format!("Phi_{n}^{k}") })
                        .collect();
                    writeln!(f, "cyclotomic {}", idx.join(" "))?
                }
            }
        }
        Ok(())
    }
}

/// Exact check that every Newton-polygon edge polynomial of A(l, m) has
/// only roots of unity as roots.
pub fn temperedness(curve: &EigenCurve) -> Result<TemperCertificate> {
    let np = newton_polygon_in(&curve.poly, Some([L, M]))?;
    let mut edges = Vec::new();
    let mut tempered = true;
    for edge in &np.edges {
        let ep = edge_polynomial_in(&curve.poly, edge, Some([L, M]))?;
        let (indices, failure) = if ep.is_constant() {
            (vec![], None)
        } else {
            let cert = is_cyclotomic_product(&ep)?;
            (cert.indices, cert.failures.first().cloned())
        };
        tempered &= failure.is_none();
        edges.push(EdgeCertificate {
            edge: edge.to_string(),
            edge_polynomial: ep.to_string(),
            cyclotomic_indices: indices,
            failure_factor: failure,
        });
    }
    Ok(TemperCertificate { tempered, edges })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderCandidate {
    pub order: u64,
    /// (place label, tame value) for every edge place visited.
    pub values: Vec<(String, String)>,
}

/// Lcm of the orders of the tame symbols of {l, m}^ε at the ideal points.
/// Zeros and poles of l, m at finite m or l also sit over polygon edges, so
/// the edge places cover every place where the symbol can ramify.
pub fn symbol_order_candidate(curve: &EigenCurve) -> Result<OrderCandidate> {
    let cert = temperedness(curve)?;
    if !cert.tempered {
        let bad: Vec<String> = cert.edges.iter().filter_map(|e| e.failure_factor.clone()).collect();
        return Err(Error::Untempered(bad.join(", ")));
    }
    let s = FormalSymbol::curve_symbol(curve.epsilon as i64);
    let mut order = 1u64;
    let mut values = Vec::new();
    for p in edge_places(curve)? {
        let v = tame_symbol(&s, &p)?;
        let n = v
            .order
            .ok_or_else(|| Error::Untempered(format!("tame symbol {v} at {} is not a root of unity", p.label())))?;
        order = order.lcm(&n);
        let label = match &p {
            Place::Edge { edge, root, .. } => format!("{edge} {root:?}"),
            other => other.label(),
        };
        values.push((label, v.to_string()));
    }
    Ok(OrderCandidate { order, values })
}
