//! Steinberg symbols over function fields: normalization, the ★-product of
//! commuting matrices, tame symbols and temperedness certificates.

mod place;
mod star;
mod symbol;
mod temper;

pub use place::{best_rational, edge_places, tame_symbol, EdgeRoot, LaurentSeries, Place, TameValue, SERIES_TERMS};
pub use star::star_product;
pub use symbol::{parse_ratfn, symbol_normalize, FormalSymbol, SymbolFactor};
pub use temper::{symbol_order_candidate, temperedness, EdgeCertificate, OrderCandidate, TemperCertificate};
