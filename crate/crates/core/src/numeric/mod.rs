//! High-precision real/complex arithmetic and the special functions used by
//! the complex-analytic L-value engine.

pub mod complex;
pub mod gamma;
pub mod real;

pub use complex::{Cx, CxBall};
pub use real::{digits_to_bits, Real};
