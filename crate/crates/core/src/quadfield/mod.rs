//! Arithmetic of the imaginary quadratic field K: elements, ideals, prime
//! splitting, residue groups, cusps.

pub mod cusps;
pub mod elem;
pub mod field;
pub mod ideal;
pub mod residue;

pub use cusps::{c_stability_check, cusp_in_c, Cusp, MatK};
pub use elem::{kronecker, BasisShape, ElemK};
pub use field::{class_number, FieldError, FieldK};
pub use ideal::{factor_ideal, factor_prime, IdealError, IdealK, Splitting};
pub use residue::{GroupChar, ResidueGroup};
