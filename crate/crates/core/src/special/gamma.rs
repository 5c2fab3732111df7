//! Complex Γ by the Lanczos approximation (g = 7, nine terms).
//!
//! Everything is computed through [`ln_gamma`] so that callers can combine
//! Γ(s) with exponentially large factors such as e^{±iπs/2} before
//! exponentiating; on vertical lines at height 500 neither factor alone is
//! representable.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// log Γ(z), up to an additive multiple of 2πi. Not defined at poles.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1−z) = π / sin(πz)
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex64::new(LN_SQRT_2PI, 0.0) + (z + 0.5) * t.ln() - t + acc.ln()
}

/// log sin(πz), stable for large |Im z| where sin itself overflows.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 10.0 {
        return (z * PI).sin().ln();
    }
    let two_i = Complex64::new(0.0, 2.0);
    if z.im > 0.0 {
        // sin(πz) = e^{−iπz} (e^{2iπz} − 1) / (2i)
        -i * PI * z + ((i * 2.0 * PI * z).exp() - 1.0).ln() - two_i.ln()
    } else {
        i * PI * z + ((1.0 - (-i * 2.0 * PI * z).exp()) / two_i).ln()
    }
}

fn near_pole(s: Complex64) -> bool {
    s.re <= 0.5 && s.im.abs() < 1e-12 && (s.re - s.re.round()).abs() < 1e-12
}

/// Γ(s) for complex s away from the non-positive integers.
pub fn gamma_complex(s: Complex64) -> Result<Complex64> {
    if near_pole(s) {
        return Err(Error::Pole(format!("Γ has a pole at {}", s.re.round())));
    }
    Ok(ln_gamma(s).exp())
}
