//! Partial Bianchi modular symbols: the dual polynomial module with its
//! group action, construction of the period-normalized classical symbol
//! from twisted L-values, and Hecke/U operators.

pub mod dualpoly;
pub mod hecke_op;
pub mod partial;

pub use dualpoly::{gamma_action, DualPoly, MatCyc};
pub use partial::{ClassicalSymbol, SymbolError};
