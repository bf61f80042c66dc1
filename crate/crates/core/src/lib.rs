//! Exact-arithmetic construction of the p-adic L-function of the ordinary
//! p-stabilized base-change Bianchi modular form attached to a CM Hecke
//! character of an imaginary quadratic field with p split.
//!
//! The pipeline runs: field data -> Hecke characters -> twisted complex
//! L-values -> period-normalized partial modular symbol (by character
//! inversion) -> overconvergent lift (control-theorem iteration) -> Mellin
//! transform -> verification of the interpolation formula and of the Katz
//! factorization at interpolation points.

pub mod arith;
pub mod dist;
pub mod heckechar;
pub mod lfun;
pub mod quadfield;
pub mod symbols;
pub mod numeric;

pub use arith::{CycNum, PadicEmbedding, PadicNum};
