//! Periodic Bernoulli functions B̄_m(x) = B_m({x}).
//!
//! Two independent evaluations are provided: the polynomial closed form
//! Σ_j C(m,j) B_{m−j} {x}^j, and the Fourier series
//! −m! Σ_{n≠0} (2πin)^{−m} e^{2πinx} truncated at |n| ≤ N with a proven bound
//! on the omitted tail.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::bernoulli::{self, binomial};
use crate::summation::CompensatedSum;

/// Highest order accepted; beyond it the binomial sum loses double range.
pub const MAX_ORDER: u32 = 32;

/// Fractional part x − ⌊x⌋, with values within 10⁻¹⁵ of 1 taken as 0.
#[inline]
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if 1.0 - f <= 1e-15 {
        0.0
    } else {
        f
    }
}

/// {n·x} with the product formed exactly (FMA residual), so that large n
/// lose no more than the rounding of x itself.
#[inline]
pub fn frac_product(n: f64, x: f64) -> f64 {
    let p = n * x;
    let e = n.mul_add(x, -p);
    let mut f = (p - p.floor()) + e;
    if f < 0.0 {
        f += 1.0;
    }
    if f >= 1.0 {
        f -= 1.0;
    }
    if 1.0 - f <= 1e-15 {
        0.0
    } else {
        f
    }
}

/// Distance from x to the nearest integer.
#[inline]
pub fn dist_to_integer(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// The Bernoulli polynomial B_m(t) with coefficients rounded once from exact
/// rationals; evaluated on t ∈ [0, 1) it is B̄_m.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliPolynomial {
    m: u32,
    // coeffs[j] multiplies t^j
    coeffs: Vec<f64>,
}

impl BernoulliPolynomial {
    pub fn new(m: u32) -> Result<Self> {
        check_order(m)?;
        let coeffs = (0..=m as usize)
            .map(|j| {
                let b = bernoulli::bernoulli_number(m as usize - j)?;
                let c = BigRational::from_integer(binomial(m as u64, j as u64)) * b;
                Ok(c.to_f64().unwrap_or(f64::NAN))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { m, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// B_m(t) for t already reduced to [0, 1).
    #[inline]
    pub fn eval_frac(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_frac(frac(x))
    }

    /// sup |B̄_m|: 1/2 for m = 1, 2·m!·ζ(m)/(2π)^m for m ≥ 2.
    pub fn sup_bound(&self) -> f64 {
        sup_bound(self.m)
    }
}

pub(crate) fn sup_bound(m: u32) -> f64 {
    if m == 1 {
        return 0.5;
    }
    // partial sum plus an upper bound for the remainder
    let zeta_m: f64 = (1..=200).map(|n| (n as f64).powi(-(m as i32))).sum::<f64>()
        + 200f64.powi(1 - m as i32) / (m as f64 - 1.0);
    2.0 * factorial(m) * zeta_m / (2.0 * PI).powi(m as i32)
}

pub(crate) fn factorial(m: u32) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

fn check_order(m: u32) -> Result<()> {
    if m == 0 || m > MAX_ORDER {
        return Err(invalid(format!(
            "Bernoulli order {m} outside 1..={MAX_ORDER}"
        )));
    }
    Ok(())
}

pub fn pb_closed(m: u32, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid(format!("non-finite x = {x}")));
    }
    Ok(BernoulliPolynomial::new(m)?.eval(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PbMethod {
    ClosedForm,
    Fourier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicBernoulliEval {
    pub m: u32,
    pub x: f64,
    pub value: f64,
    pub method: PbMethod,
    pub fourier_terms: Option<u64>,
    pub tail_bound: Option<f64>,
}

/// Bound on the Fourier tail beyond `terms` conjugate pairs.
///
/// For m ≥ 2 this is 2·m!/((2π)^m (m−1) N^{m−1}); for m = 1 the Abel-summation
/// bound 1/(π N dist(x, ℤ)).
pub fn fourier_tail_bound(m: u32, x: f64, terms: u64) -> f64 {
    let n = terms as f64;
    if m == 1 {
        1.0 / (PI * n * dist_to_integer(x))
    } else {
        2.0 * factorial(m) / ((2.0 * PI).powi(m as i32) * (m as f64 - 1.0) * n.powi(m as i32 - 1))
    }
}

/// Real-combined Fourier partial sum −2·m!(2π)^{−m} Σ_{n≤N} cos(2πnx − πm/2)/n^m.
pub fn pb_fourier(m: u32, x: f64, terms: u64) -> Result<PeriodicBernoulliEval> {
    check_order(m)?;
    if terms == 0 {
        return Err(invalid("Fourier evaluation needs at least one term"));
    }
    if !x.is_finite() {
        return Err(invalid(format!("non-finite x = {x}")));
    }
    if m == 1 && dist_to_integer(x) < 1e-6 {
        return Err(Error::Domain(format!(
            "the m = 1 Fourier series converges to the midpoint at integers (x = {x})"
        )));
    }
    let mut acc = CompensatedSum::new();
    for n in 1..=terms {
        let nf = n as f64;
        let theta = 2.0 * PI * frac_product(nf, x);
        let c = match m % 4 {
            0 => theta.cos(),
            1 => theta.sin(),
            2 => -theta.cos(),
            _ => -theta.sin(),
        };
        acc.add(c * nf.powi(-(m as i32)));
    }
    let value = -2.0 * factorial(m) / (2.0 * PI).powi(m as i32) * acc.value();
    Ok(PeriodicBernoulliEval {
        m,
        x,
        value,
        method: PbMethod::Fourier,
        fourier_terms: Some(terms),
        tail_bound: Some(fourier_tail_bound(m, x, terms)),
    })
}

/// Closed-form evaluation packaged like [`pb_fourier`]'s result.
pub fn pb_closed_eval(m: u32, x: f64) -> Result<PeriodicBernoulliEval> {
    Ok(PeriodicBernoulliEval {
        m,
        x,
        value: pb_closed(m, x)?,
        method: PbMethod::ClosedForm,
        fourier_terms: None,
        tail_bound: None,
    })
}
