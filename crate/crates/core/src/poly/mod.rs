//! Exact polynomial arithmetic over Q.

mod cyclotomic;
mod factor;
pub mod gcd;
mod mat2;
mod multi;
mod newton;
mod ratfn;
mod resultant;
mod text;

pub use num_rational::BigRational as Rat;

pub use cyclotomic::{cyclotomic, cyclotomic_index, is_cyclotomic_product, totient, CyclotomicCertificate};
pub use factor::{univariate_factor, Factorization, DEGREE_CAP};
pub use gcd::{gcd, lcm, squarefree_part};
pub use mat2::Mat2;
pub use multi::{rat_sqrt, rat_to_f64, Mono, MultiPoly};
pub use newton::{
    convex_hull, edge_polynomial, edge_polynomial_in, newton_polygon, newton_polygon_in, Edge, Lattice,
    NewtonPolygon,
};
pub use ratfn::RatFn;
pub use resultant::{bareiss_det, resultant, sylvester_matrix};
pub use text::parse_poly;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
