//! Vertical-line quadrature of the Mellin inversion integral.
//!
//! (1/2πi) ∫_{c−iT}^{c+iT} F(s) x^{−s} ds with F as in
//! [`KernelSpec::integrand`], by composite Simpson on a uniform grid in t.
//! On Re s = c the integrand only decays like |t|^{c−1/2}, so a plain cut at
//! ±T leaves an O(1/T)-oscillating error; an optional linear taper over the
//! outer fraction of [−T, T] (a Cesàro mean of the truncations) removes it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{Kernel, KernelSpec};
use crate::error::{invalid, Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::summation::{tree_reduce, ComplexCompensatedSum};

pub const DEFAULT_C: f64 = 0.5;
pub const DEFAULT_STEPS: usize = 200_000;
pub const DEFAULT_TAPER: f64 = 0.5;
const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineIntegralSpec {
    pub c: f64,
    pub t_max: f64,
    pub steps: usize,
    pub m: u32,
    pub kernel: Kernel,
    /// Fraction of T over which the weight falls linearly to 0; 0 is a sharp cut.
    pub taper: f64,
}

impl LineIntegralSpec {
    pub fn new(m: u32, t_max: f64, kernel: Kernel) -> Self {
        Self {
            c: DEFAULT_C,
            t_max,
            steps: DEFAULT_STEPS,
            m,
            kernel,
            taper: DEFAULT_TAPER,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(invalid(format!("abscissa c = {} outside (0, 1)", self.c)));
        }
        if !(self.t_max > 0.0 && self.t_max <= 500.0) {
            return Err(invalid(format!("height T = {} outside (0, 500]", self.t_max)));
        }
        if self.steps < 2 || self.steps % 2 == 1 {
            return Err(invalid(format!("Simpson needs an even step count, got {}", self.steps)));
        }
        if !(0.0..=1.0).contains(&self.taper) {
            return Err(invalid(format!("taper {} outside [0, 1]", self.taper)));
        }
        if (self.c + self.m as f64 - 1.0).abs() < 1e-3 {
            return Err(Error::Configuration(format!(
                "kernel pole on the line: c + m = {}",
                self.c + self.m as f64
            )));
        }
        KernelSpec::new(self.m, self.kernel)?;
        Ok(())
    }

    fn weight(&self, t: f64) -> f64 {
        if self.taper == 0.0 {
            return 1.0;
        }
        ((self.t_max - t.abs()) / (self.taper * self.t_max)).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineIntegral {
    pub spec: LineIntegralSpec,
    pub x: f64,
    /// (1/2πi)∫ F(s) x^{−s} ds in series units: B̄_m(x) for the ζ kernel.
    pub value: Complex64,
}

impl LineIntegral {
    /// (2πi)^m times the value, the scale on which the inversion formulas are
    /// usually written.
    pub fn scaled(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * PI).powu(self.spec.m) * self.value
    }
}

pub fn line_integral(spec: &LineIntegralSpec, x: f64) -> Result<LineIntegral> {
    Ok(line_integral_batch(spec, &[x])?.remove(0))
}

/// One sweep of the kernel along the line shared by every x.
pub fn line_integral_batch(spec: &LineIntegralSpec, xs: &[f64]) -> Result<Vec<LineIntegral>> {
    spec.validate()?;
    if let Some(x) = xs.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
        return Err(invalid(format!("x = {x} outside (0, 1]")));
    }
    let kspec = KernelSpec::new(spec.m, spec.kernel)?;
    let h = 2.0 * spec.t_max / spec.steps as f64;
    let ln_x: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let blocks = (spec.steps + 1).div_ceil(BLOCK);
    let partials = map_indexed(blocks, ExecMode::default(), |b| -> Result<Vec<ComplexCompensatedSum>> {
        let mut acc = vec![ComplexCompensatedSum::new(); xs.len()];
        let lo = b * BLOCK;
        let hi = ((b + 1) * BLOCK).min(spec.steps + 1);
        for i in lo..hi {
            let simpson = if i == 0 || i == spec.steps {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let t = -spec.t_max + i as f64 * h;
            let w = simpson * spec.weight(t);
            if w == 0.0 {
                continue;
            }
            let s = Complex64::new(spec.c, t);
            let f = kspec.integrand(s)? * w;
            for (a, &lx) in acc.iter_mut().zip(&ln_x) {
                a.add(f * (-s * lx).exp());
            }
        }
        Ok(acc)
    });
    let partials = partials
        .into_iter()
        .map(|p| p.map(Batch))
        .collect::<Result<Vec<_>>>()?;
    let total = tree_reduce(&partials);
    // ds = i dt, so (1/2πi)∫ … ds = (1/2π)∫ … dt
    let scale = h / 3.0 / (2.0 * PI);
    Ok(xs
        .iter()
        .zip(total.0)
        .map(|(&x, s)| LineIntegral {
            spec: *spec,
            x,
            value: s.value() * scale,
        })
        .collect())
}

#[derive(Debug, Clone, Default)]
struct Batch(Vec<ComplexCompensatedSum>);

impl crate::summation::Mergeable for Batch {
    fn merge_from(&mut self, other: &Self) {
        if self.0.is_empty() {
            self.0 = other.0.clone();
            return;
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.merge(b);
        }
    }
}
