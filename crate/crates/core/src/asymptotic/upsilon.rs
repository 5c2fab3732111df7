//! The residue-built model C + Υ(x) + trailing series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::{Kernel, KernelSpec};
use super::laurent::{LaurentCoefficients, DEFAULT_NODES, DEFAULT_RADIUS};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelMethod {
    Residue,
    Fit,
}

/// x^e (coeff + log_coeff·log x + log2_coeff·log²x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLogTerm {
    pub exponent: u32,
    pub coeff: f64,
    pub log_coeff: f64,
    pub log2_coeff: f64,
}

impl PowerLogTerm {
    fn from_laurent(exponent: u32, c: &LaurentCoefficients) -> Self {
        Self {
            exponent,
            coeff: c.c_m1.re,
            log_coeff: -c.c_m2.re,
            log2_coeff: c.c_m3.re / 2.0,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let l = x.ln();
        x.powi(self.exponent as i32) * (self.coeff + l * (self.log_coeff + l * self.log2_coeff))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpsilonModel {
    pub k: u32,
    pub kernel: Option<Kernel>,
    /// The s = 0 residue: the x → 0⁺ limit of the series.
    pub constant: f64,
    /// Terms with exponents 1..k−1.
    pub poly: Vec<PowerLogTerm>,
    /// Terms with exponents k + 2l and k + 2l + 1 for l = 0..=l_max, in order.
    pub trailing: Vec<PowerLogTerm>,
    pub l_max: u32,
    pub method: ModelMethod,
    /// Largest imaginary part discarded from an extracted coefficient.
    pub imaginary_leak: f64,
}

impl UpsilonModel {
    /// Υ(x): the polynomial-plus-log part, zero at x = 0.
    pub fn upsilon(&self, x: f64) -> f64 {
        self.poly.iter().map(|t| t.eval(x)).sum()
    }

    pub fn trailing_sum(&self, x: f64) -> f64 {
        self.trailing.iter().map(|t| t.eval(x)).sum()
    }

    /// C + Υ(x) + trailing series.
    pub fn eval(&self, x: f64) -> f64 {
        self.constant + self.upsilon(x) + self.trailing_sum(x)
    }

    /// Coefficient of x^{k−1} log x.
    pub fn h_dot(&self) -> f64 {
        self.poly
            .iter()
            .find(|t| t.exponent + 1 == self.k)
            .map_or(0.0, |t| t.log_coeff)
    }

    pub fn poly_term(&self, exponent: u32) -> Option<&PowerLogTerm> {
        self.poly.iter().find(|t| t.exponent == exponent)
    }

    fn trailing_term(&self, exponent: u32) -> Option<&PowerLogTerm> {
        self.trailing.iter().find(|t| t.exponent == exponent)
    }

    /// p_l: coefficient of x^{k+2l}.
    pub fn p(&self, l: u32) -> f64 {
        self.trailing_term(self.k + 2 * l).map_or(0.0, |t| t.coeff)
    }

    /// r_l: coefficient of x^{k+2l} log x.
    pub fn r(&self, l: u32) -> f64 {
        self.trailing_term(self.k + 2 * l).map_or(0.0, |t| t.log_coeff)
    }

    /// q_l: coefficient of x^{k+2l+1}.
    pub fn q(&self, l: u32) -> f64 {
        self.trailing_term(self.k + 2 * l + 1).map_or(0.0, |t| t.coeff)
    }
}

pub fn build_upsilon(k: u32, kernel: Kernel, l_max: u32) -> Result<UpsilonModel> {
    build_upsilon_with(k, kernel, l_max, DEFAULT_RADIUS, DEFAULT_NODES)
}

pub fn build_upsilon_with(
    k: u32,
    kernel: Kernel,
    l_max: u32,
    radius: f64,
    nodes: usize,
) -> Result<UpsilonModel> {
    if k < 2 {
        return Err(invalid("the expansion needs k ≥ 2"));
    }
    if l_max > 4 {
        return Err(invalid(format!("trailing depth {l_max} above 4")));
    }
    if kernel == Kernel::Zeta {
        return Err(invalid("the ζ kernel has no arithmetic expansion"));
    }
    let spec = KernelSpec::new(k, kernel)?;
    let mut leak: f64 = 0.0;
    let mut at = |l: u32| -> Result<LaurentCoefficients> {
        let c = spec.laurent_extract(Complex64::new(-(l as f64), 0.0), radius, nodes)?;
        for v in [c.c_m3, c.c_m2, c.c_m1] {
            leak = leak.max(v.im.abs());
        }
        Ok(c)
    };
    let constant = at(0)?.c_m1.re;
    let mut poly = Vec::with_capacity(k as usize - 1);
    for l in 1..k {
        poly.push(PowerLogTerm::from_laurent(l, &at(l)?));
    }
    let mut trailing = Vec::with_capacity(2 * l_max as usize + 2);
    for l in 0..=l_max {
        for e in [k + 2 * l, k + 2 * l + 1] {
            trailing.push(PowerLogTerm::from_laurent(e, &at(e)?));
        }
    }
    if !leak.is_finite() {
        return Err(Error::Numeric("non-finite Laurent coefficient".into()));
    }
    Ok(UpsilonModel {
        k,
        kernel: Some(kernel),
        constant,
        poly,
        trailing,
        l_max,
        method: ModelMethod::Residue,
        imaginary_leak: leak,
    })
}
