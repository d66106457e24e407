pub mod error;
pub mod k2;
pub mod numeric;
pub mod oracle;
pub mod poly;
pub mod regulator;
pub mod repvar;

pub use error::{Error, Result};
