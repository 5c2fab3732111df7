//! Small-x expansion of the Möbius-weighted series.
//!
//! The residues of the Mellin integrand at s = 0 and at the negative integers
//! give the constant, the polynomial part Υ and the trailing power/log series.
//! They are extracted numerically on small circles, so that double and triple
//! poles produce their log x terms without special casing.

mod fit;
mod kernel;
mod laurent;
mod residual;
mod upsilon;

pub use fit::{compare_models, fit_upsilon, CoefficientAgreement, FitBasis, ModelComparison};
pub use kernel::{constant_c, Kernel, KernelSpec};
pub use laurent::{laurent_on_circle, LaurentCoefficients, DEFAULT_NODES, DEFAULT_RADIUS};
pub use residual::{envelope_fit, log_grid, residual_exponent, ResidualReport};
pub use upsilon::{build_upsilon, build_upsilon_with, ModelMethod, PowerLogTerm, UpsilonModel};
