//! Two-bridge representation families and their eigenvalue curves.

mod code;
mod curve;
mod family;
mod io;

pub use code::{abelianize, presentation, Gen, Presentation, TwoBridgeCode, Word};
pub use family::{rep_family, riley_polynomial, RepFamily, U};
pub use curve::{basepoint, eigen_curve, solved_points, Basepoint, EigenCurve, SolvedRep, L, M};
pub use io::{read_curve, write_curve, LinkInput};
