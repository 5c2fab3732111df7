//! Numerics for Möbius-weighted periodic Bernoulli series.
//!
//! The central object is
//!
//! ```text
//!     S_k(x) = Σ_{n≥1} μ(n) log(n) B̄_k(nx) / n^k
//! ```
//!
//! together with its small-x expansion: a constant, a polynomial part read
//! off from residues of a Mellin–Barnes integrand, and an oscillating sum
//! over the non-trivial zeros of ζ whose size is `x^{k-1/2}` when the zeros
//! lie on the critical line.
//!
//! Modules, bottom-up:
//!
//! - [`sieve`]: μ, ω and friends, full-table and segmented.
//! - [`special`]: Bernoulli numbers, complex Γ, ζ and its derivatives.
//! - [`periodic_bernoulli`]: B̄_m by the closed form and by Fourier series.
//! - [`series`]: truncated series with tail bounds and deterministic
//!   parallel reduction.
//! - [`identities`]: the squared-B̄₁ identities against their inversion forms.
//! - [`asymptotic`]: integrand kernels, Laurent extraction, the asymptotic
//!   model and residual-exponent fitting.
//! - [`zeros`]: zero-table ingestion, zero sums, explicit-formula checks.
//! - [`mellin`]: direct vertical-line quadrature of the inversion integrals.

pub mod asymptotic;
pub mod error;
pub mod exec;
pub mod identities;
pub mod mellin;
pub mod periodic_bernoulli;
pub mod series;
pub mod sieve;
pub mod special;
pub mod summation;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;
