//! Complex-analytic engine: Dirichlet coefficients, Hecke L-values via the
//! smoothed functional equation, CM periods, algebraic recognition, the
//! completed and stabilized Lambda, and the Katz interpolation constant.

pub mod afe;
pub mod coeffs;
pub mod katz;
pub mod lambda;
pub mod periods;
pub mod recognize;

pub use afe::{hecke_lvalue, plain_lvalue, LValue, LfunError};
pub use katz::katz_rhs;
pub use lambda::{BianchiInstance, LambdaError};
pub use periods::{cm_periods, CurveConfig, Periods};
pub use recognize::rationalize;
