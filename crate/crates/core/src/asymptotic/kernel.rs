//! The Mellin integrand F(s) whose residues make up the small-x expansion.
//!
//! For a_n with Dirichlet series A(s),
//!
//! Σ a_n B̄_k(nx)/n^k = (1/2πi) ∫_{(c)} F(s) x^{−s} ds,
//! F(s) = −k!/(2πi)^k · Γ(s)(2π)^{−s}(e^{iπs/2} + (−1)^k e^{−iπs/2}) · A(s+k)ζ(s+k).
//!
//! The kernel is the product A·ζ evaluated at s + k.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::periodic_bernoulli::factorial;
use crate::series::{Coefficient, SeriesSpec};
use crate::special::gamma::ln_gamma;
use crate::special::zeta::zeta_upto;

/// The kernel A(w)ζ(w).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// ζ(w): a_n = δ_{n,1}, the series is B̄_k(x) itself.
    Zeta,
    /// ζ′/ζ(w), paired with a_n = μ(n) log n.
    ZetaPrimeOverZeta,
    /// ζ′/ζ²(w), paired with a_n = ½(μ∗μ)(n) log n.
    ZetaPrimeOverZetaSquared,
}

impl Kernel {
    pub fn eval(self, w: Complex64) -> Result<Complex64> {
        match self {
            Kernel::Zeta => Ok(zeta_upto(w, 0)?[0]),
            Kernel::ZetaPrimeOverZeta | Kernel::ZetaPrimeOverZetaSquared => {
                let [z, dz, _] = zeta_upto(w, 1)?;
                if z.norm() == 0.0 {
                    return Err(Error::NearSingularity(format!("ζ vanishes at {w}")));
                }
                Ok(if self == Kernel::ZetaPrimeOverZeta {
                    dz / z
                } else {
                    dz / (z * z)
                })
            }
        }
    }

    /// Coefficient kind whose series this kernel describes.
    pub fn coefficient(self) -> Option<Coefficient> {
        match self {
            Kernel::Zeta => None,
            Kernel::ZetaPrimeOverZeta => Some(Coefficient::MuLog),
            Kernel::ZetaPrimeOverZetaSquared => Some(Coefficient::MuMuLog),
        }
    }

    pub fn series_spec(self, k: u32) -> Option<SeriesSpec> {
        self.coefficient().map(|c| SeriesSpec::standard(c, k))
    }

    /// Pole order of the kernel at an integer w (zeros of ζ off the real line excluded).
    pub fn order_at_integer(self, w: i64) -> u32 {
        let trivial_zero = w <= -2 && w % 2 == 0;
        match self {
            Kernel::Zeta => u32::from(w == 1),
            Kernel::ZetaPrimeOverZeta => u32::from(w == 1 || trivial_zero),
            Kernel::ZetaPrimeOverZetaSquared => {
                if trivial_zero {
                    2
                } else {
                    0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Zeta => "zeta",
            Kernel::ZetaPrimeOverZeta => "zeta_prime_over_zeta",
            Kernel::ZetaPrimeOverZetaSquared => "zeta_prime_over_zeta_squared",
        }
    }
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "zeta" => Kernel::Zeta,
            "mulog" | "zpz" | "zeta_prime_over_zeta" => Kernel::ZetaPrimeOverZeta,
            "mumulog" | "zpz2" | "zeta_prime_over_zeta_squared" => {
                Kernel::ZetaPrimeOverZetaSquared
            }
            _ => return Err(invalid(format!("unknown kernel {s:?}"))),
        })
    }
}

impl std::fmt::Display for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub m: u32,
    pub kernel: Kernel,
}

impl KernelSpec {
    pub fn new(m: u32, kernel: Kernel) -> Result<Self> {
        if m == 0 || m > 32 {
            return Err(invalid(format!("order {m} outside 1..=32")));
        }
        Ok(Self { m, kernel })
    }

    /// −m!/(2πi)^m.
    pub fn normalization(&self) -> Complex64 {
        let mag = -factorial(self.m) / (2.0 * PI).powi(self.m as i32);
        // i^{−m}
        let phase = match self.m % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        };
        phase * mag
    }

    /// Γ(s)(2π)^{−s}(e^{iπs/2} + (−1)^m e^{−iπs/2}), formed in log space so that
    /// the exponential growth of one branch meets the decay of Γ before
    /// exponentiation.
    pub fn archimedean(&self, s: Complex64) -> Result<Complex64> {
        let near = s.re.round();
        if near <= 0.0 && (s - near).norm() < 1e-12 {
            return Err(Error::Pole(format!("Γ has a pole at {near}")));
        }
        let i_half_pi = Complex64::new(0.0, PI / 2.0);
        let base = ln_gamma(s) - s * (2.0 * PI).ln();
        let up = (base + i_half_pi * s).exp();
        let down = (base - i_half_pi * s).exp();
        Ok(if self.m % 2 == 0 { up + down } else { up - down })
    }

    /// F(s) without the x^{−s} factor.
    pub fn integrand(&self, s: Complex64) -> Result<Complex64> {
        let k = self.kernel.eval(s + self.m as f64)?;
        Ok(self.normalization() * self.archimedean(s)? * k)
    }

    /// F(s) x^{−s}.
    pub fn integrand_at(&self, s: Complex64, x: f64) -> Result<Complex64> {
        Ok(self.integrand(s)? * (-s * x.ln()).exp())
    }

    /// Pole order of F at s = −l for l ≥ 0, from the factor census
    /// Γ (simple pole), the prefactor (simple zero when l + m is odd),
    /// and the kernel at m − l.
    pub fn pole_order(&self, l: u32) -> u32 {
        let prefactor_zero = (l + self.m) % 2 == 1;
        let total = 1 + self.kernel.order_at_integer(self.m as i64 - l as i64) as i32
            - i32::from(prefactor_zero);
        total.max(0) as u32
    }

    /// Real poles of F other than the non-positive integers: only s = 1 − m, which
    /// is itself a non-positive integer for m ≥ 1.
    pub fn is_lattice_point(s: Complex64) -> bool {
        s.im.abs() < 1e-12 && s.re <= 1e-12 && (s.re - s.re.round()).abs() < 1e-12
    }

    /// Residue of F x^{−s} at the zero site s = ρ − m for the ζ′/ζ kernel
    /// (ρ simple): normalization · Γ(ρ−m)(2π)^{m−ρ} P(ρ−m) · x^{m−ρ}.
    pub fn zero_residue_closed(&self, rho: Complex64, x: f64) -> Result<Complex64> {
        if self.kernel != Kernel::ZetaPrimeOverZeta {
            return Err(invalid("closed-form zero residues exist only for ζ′/ζ"));
        }
        let s = rho - self.m as f64;
        Ok(self.normalization() * self.archimedean(s)? * (-s * x.ln()).exp())
    }
}

/// The s = 0 residue of F in series units.
///
/// For even k this is −2·k!(2πi)^{−k}·K(k); for the ζ′/ζ kernel it equals
/// B_k ζ′(k)/ζ²(k). Odd k gives 0.
pub fn constant_c(k: u32, kernel: Kernel) -> Result<f64> {
    let spec = KernelSpec::new(k, kernel)?;
    if k % 2 == 1 {
        return Ok(0.0);
    }
    if kernel == Kernel::Zeta && k == 0 {
        return Err(invalid("k must be positive"));
    }
    let kv = kernel.eval(Complex64::new(k as f64, 0.0))?;
    Ok((spec.normalization() * 2.0 * kv).re)
}
