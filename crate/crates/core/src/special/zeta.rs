//! ζ(s), ζ′(s), ζ″(s) by Euler–Maclaurin summation.
//!
//! For Re s ≥ −1/2 the expansion
//!
//! ```text
//! ζ(s) = Σ_{n<N} n^{−s} + N^{1−s}/(s−1) + N^{−s}/2
//!        + Σ_{j=1}^{p} B_{2j}/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1} + R_p
//! ```
//! is used with N = max(20, ⌈2|Im s|⌉) and p grown until the next correction
//! falls below 10⁻¹⁷ of the running value; derivatives come from
//! differentiating every term. Further left, the value comes from the
//! functional equation and derivatives from a Cauchy integral over a small
//! circle, because the partial sums there cancel catastrophically.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::special::bernoulli;
use crate::special::gamma::{ln_gamma, ln_sin_pi};
use crate::summation::ComplexCompensatedSum;

/// Heights above this are rejected.
pub const DEFAULT_MAX_HEIGHT: f64 = 500.0;

const LEFT_EDGE: f64 = -0.5;
const CAUCHY_RADIUS: f64 = 0.25;
const CAUCHY_NODES: usize = 64;
const MAX_CORRECTIONS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaOrder {
    Value = 0,
    First = 1,
    Second = 2,
}

impl TryFrom<u8> for ZetaOrder {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(ZetaOrder::Value),
            1 => Ok(ZetaOrder::First),
            2 => Ok(ZetaOrder::Second),
            _ => Err(Error::InvalidArgument(format!(
                "derivative order {v} not in 0..=2"
            ))),
        }
    }
}

pub fn zeta(s: Complex64) -> Result<Complex64> {
    Ok(zeta_upto(s, 0)?[0])
}

pub fn zeta_with_derivatives(s: Complex64, order: ZetaOrder) -> Result<Complex64> {
    let k = order as usize;
    Ok(zeta_upto(s, k)?[k])
}

/// `[ζ(s), ζ′(s), ζ″(s)]`.
pub fn zeta_derivatives(s: Complex64) -> Result<[Complex64; 3]> {
    zeta_upto(s, 2)
}

/// ζ′(s)/ζ(s); refuses points where |ζ(s)| < 10⁻¹⁰.
pub fn zeta_log_deriv(s: Complex64) -> Result<Complex64> {
    let [z, dz, _] = zeta_upto(s, 1)?;
    if z.norm() < 1e-10 {
        return Err(Error::NearSingularity(format!(
            "|ζ({s})| = {:.3e}; extract coefficients on a contour instead",
            z.norm()
        )));
    }
    Ok(dz / z)
}

/// χ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s), so that ζ(s) = χ(s) ζ(1−s).
pub fn chi(s: Complex64) -> Result<Complex64> {
    check_argument(s)?;
    Ok(chi_unchecked(s))
}

fn chi_unchecked(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let log_rest = s * std::f64::consts::LN_2 + (s - one) * PI.ln() + ln_gamma(one - s);
    if s.im.abs() < 20.0 {
        (s * (PI / 2.0)).sin() * log_rest.exp()
    } else {
        (log_rest + ln_sin_pi(s * 0.5)).exp()
    }
}

fn check_argument(s: Complex64) -> Result<()> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite argument {s}")));
    }
    if s.im.abs() > DEFAULT_MAX_HEIGHT {
        return Err(Error::UnsupportedRange(format!(
            "|Im s| = {} above the supported height {DEFAULT_MAX_HEIGHT}",
            s.im.abs()
        )));
    }
    if (s - 1.0).norm() < 1e-15 {
        return Err(Error::Pole("ζ has a pole at s = 1".into()));
    }
    Ok(())
}

/// Orders `0..=depth` (entries above `depth` are zero).
pub(crate) fn zeta_upto(s: Complex64, depth: usize) -> Result<[Complex64; 3]> {
    check_argument(s)?;
    if s.re >= LEFT_EDGE {
        return Ok(euler_maclaurin(s, depth));
    }
    let mut out = [Complex64::new(0.0, 0.0); 3];
    out[0] = functional_equation(s);
    if depth > 0 {
        let mut acc = [ComplexCompensatedSum::new(); 3];
        for j in 0..CAUCHY_NODES {
            let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CAUCHY_NODES as f64);
            let v = value_unchecked(s + w * CAUCHY_RADIUS);
            let mut wk = Complex64::new(1.0, 0.0);
            for a in acc.iter_mut().take(depth + 1).skip(1) {
                wk /= w;
                a.add(v * wk);
            }
        }
        let mut fact = 1.0;
        for (k, slot) in out.iter_mut().enumerate().take(depth + 1).skip(1) {
            fact *= k as f64;
            *slot = acc[k].value() * fact
                / (CAUCHY_NODES as f64 * CAUCHY_RADIUS.powi(k as i32));
        }
    }
    Ok(out)
}

fn value_unchecked(s: Complex64) -> Complex64 {
    if s.re >= LEFT_EDGE {
        euler_maclaurin(s, 0)[0]
    } else {
        functional_equation(s)
    }
}

fn functional_equation(s: Complex64) -> Complex64 {
    let reflected = euler_maclaurin(Complex64::new(1.0, 0.0) - s, 0)[0];
    chi_unchecked(s) * reflected
}

fn ln_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=4096).map(|n| (n.max(1) as f64).ln()).collect())
}

/// B_{2j}/(2j)! for j = 1..=MAX_CORRECTIONS.
fn correction_coefficients() -> &'static [f64] {
    static COEF: OnceLock<Vec<f64>> = OnceLock::new();
    COEF.get_or_init(|| {
        let mut fact = BigRational::from_integer(1.into());
        let mut out = Vec::with_capacity(MAX_CORRECTIONS);
        for j in 1..=MAX_CORRECTIONS {
            fact *= BigRational::from_integer(((2 * j - 1) * (2 * j)).into());
            let b = bernoulli::bernoulli_number(2 * j).expect("index within table");
            out.push((b / &fact).to_f64().unwrap_or(0.0));
        }
        out
    })
}

fn euler_maclaurin(s: Complex64, depth: usize) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let n_cut = (2.0 * s.im.abs()).ceil().max(20.0) as usize;
    let lns = ln_table();
    let ln_at = |n: usize| if n < lns.len() { lns[n] } else { (n as f64).ln() };

    let mut sums = [ComplexCompensatedSum::new(); 3];
    for n in 1..n_cut {
        let l = ln_at(n);
        let (sin, cos) = (s.im * l).sin_cos();
        let p = Complex64::new(cos, -sin) * (-s.re * l).exp();
        sums[0].add(p);
        if depth >= 1 {
            sums[1].add(p * -l);
        }
        if depth >= 2 {
            sums[2].add(p * (l * l));
        }
    }

    let big_l = ln_at(n_cut);
    let one = Complex64::new(1.0, 0.0);
    let n_pow = ((one - s) * big_l).exp(); // N^{1−s}
    let v = one / (s - 1.0);
    let half = (-s * big_l).exp() * 0.5; // N^{−s}/2
    let mut out = [zero; 3];
    out[0] = sums[0].value() + n_pow * v + half;
    if depth >= 1 {
        out[1] = sums[1].value() - n_pow * v * big_l - n_pow * v * v - half * big_l;
    }
    if depth >= 2 {
        out[2] = sums[2].value()
            + n_pow * v * (big_l * big_l)
            + n_pow * v * v * (2.0 * big_l)
            + n_pow * v * v * v * 2.0
            + half * (big_l * big_l);
    }

    // q_j(s) = s(s+1)…(s+2j−2) with its first two derivatives
    let mut q = [s, one, zero];
    let mut w = (-(s + 1.0) * big_l).exp(); // N^{−s−1}
    let inv_n2 = 1.0 / (n_cut as f64 * n_cut as f64);
    let mut prev = f64::INFINITY;
    for (j, &c) in correction_coefficients().iter().enumerate() {
        let t0 = q[0] * w * c;
        let t1 = (q[1] - q[0] * big_l) * w * c;
        let t2 = (q[2] - q[1] * (2.0 * big_l) + q[0] * (big_l * big_l)) * w * c;
        let size = t0.norm().max(if depth >= 1 { t1.norm() } else { 0.0 });
        if size > prev {
            break; // asymptotic series started to diverge
        }
        out[0] += t0;
        if depth >= 1 {
            out[1] += t1;
        }
        if depth >= 2 {
            out[2] += t2;
        }
        let settled = t0.norm() <= 1e-17 * out[0].norm().max(1e-300)
            && (depth < 1 || t1.norm() <= 1e-17 * out[1].norm().max(1e-300))
            && (depth < 2 || t2.norm() <= 1e-17 * out[2].norm().max(1e-300));
        if settled || size == 0.0 {
            break;
        }
        prev = size;
        for a in [2 * j + 1, 2 * j + 2] {
            let f = s + a as f64;
            q = [q[0] * f, q[1] * f + q[0], q[2] * f + q[1] * 2.0];
        }
        w *= inv_n2;
    }
    out
}
