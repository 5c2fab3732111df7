//! Special functions over the complex plane: Bernoulli numbers, Γ, ζ.

pub mod bernoulli;
pub mod gamma;
pub mod zeta;

pub use bernoulli::{bernoulli_f64, bernoulli_number, BernoulliTable};
pub use gamma::{gamma_complex, ln_gamma, ln_sin_pi};
pub use zeta::{chi, zeta, zeta_derivatives, zeta_log_deriv, zeta_with_derivatives, ZetaOrder};
