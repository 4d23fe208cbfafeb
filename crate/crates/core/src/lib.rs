//! SU(2) quantum invariants of 3-manifolds with colored framed graphs, by
//! two routes: shadow state sums and surgery presentations.

// index loops mirror the matrix and slot formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod recoupling;
pub mod shadow;
pub mod skein;
pub mod surgery;
pub mod tl;

pub use arith::{ComplexValue, LaurentScalar, QFrac, RootContext, RootKey};
pub use error::{Error, Result};
pub use shadow::{PhaseSign, Shadow};
pub use skein::{FramedGraphDiagram, OracleBudget};
pub use surgery::FramedLink;
