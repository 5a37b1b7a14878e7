pub mod arith;
pub mod dtable;
pub mod error;
pub mod hop;
pub mod intersect;
pub mod laurent;
pub mod linalg;
mod memo;
pub mod oracle;
pub mod partition;
pub mod pengine;
pub mod symfunc;

pub use arith::Rat;
pub use dtable::{DTable, Route};
pub use error::{Error, Result};
pub use intersect::Correlator;
pub use partition::Partition;
pub use symfunc::{Basis, SymPoly};
