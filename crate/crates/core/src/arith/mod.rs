//! Exact coefficient arithmetic: cyclotomic fields, truncated p-adics, and
//! the fixed embedding between them.

pub mod cyclotomic;
pub mod embed;
pub mod hensel;
pub mod padic;
pub mod padic_cyc;

pub use cyclotomic::{cyclotomic_poly, euler_phi, CycError, CycNum};
pub use embed::{split_conductor, EmbedError, PadicEmbedding};
pub use hensel::{hensel_root, HenselError};
pub use padic::{PadicError, PadicNum};
pub use padic_cyc::PadicCyc;
