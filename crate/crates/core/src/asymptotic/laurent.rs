//! Laurent coefficients from trapezoid sums on a circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel::KernelSpec;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::summation::ComplexCompensatedSum;

pub const DEFAULT_RADIUS: f64 = 0.25;
pub const DEFAULT_NODES: usize = 256;
const STABILITY: f64 = 1e-9;

/// Coefficients of (s − s₀)^j for j = −3..=0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaurentCoefficients {
    pub pole: Complex64,
    pub c_m3: Complex64,
    pub c_m2: Complex64,
    pub c_m1: Complex64,
    pub c_0: Complex64,
    pub radius: f64,
    pub nodes: usize,
    /// Largest change between `nodes / 2` and `nodes`, relative to the largest coefficient.
    pub doubling_change: f64,
}

impl LaurentCoefficients {
    fn scale(&self) -> f64 {
        [self.c_m3, self.c_m2, self.c_m1, self.c_0]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Residue of F(s) x^{−s}: x^{−s₀}(c₋₁ − c₋₂ log x + c₋₃ log²x / 2).
    pub fn residue_with_power(&self, x: f64) -> Complex64 {
        let lx = x.ln();
        (-self.pole * lx).exp() * (self.c_m1 - self.c_m2 * lx + self.c_m3 * (lx * lx / 2.0))
    }
}

fn circle_sums<F>(f: &F, pole: Complex64, radius: f64, nodes: usize) -> Result<[Complex64; 4]>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let values = map_indexed(nodes, ExecMode::default(), |q| {
        let w = Complex64::from_polar(1.0, 2.0 * PI * q as f64 / nodes as f64);
        f(pole + w * radius).map(|v| (v, w))
    });
    let mut acc = [ComplexCompensatedSum::new(); 4];
    for v in values {
        let (v, w) = v?;
        let mut wk = v;
        acc[0].add(wk);
        for a in acc.iter_mut().skip(1) {
            wk *= w;
            a.add(wk);
        }
    }
    let n = nodes as f64;
    Ok([
        acc[0].value() / n,
        acc[1].value() * radius / n,
        acc[2].value() * radius.powi(2) / n,
        acc[3].value() * radius.powi(3) / n,
    ])
}

/// Extracts c₋₃..c₀ of `f` at `pole`, verifying node-doubling stability.
pub fn laurent_on_circle<F>(
    f: F,
    pole: Complex64,
    radius: f64,
    nodes: usize,
) -> Result<LaurentCoefficients>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Configuration(format!("radius {radius} must be positive")));
    }
    if nodes < 64 || !nodes.is_power_of_two() {
        return Err(Error::Configuration(format!(
            "node count {nodes} must be a power of two ≥ 64"
        )));
    }
    let coarse = circle_sums(&f, pole, radius, nodes / 2)?;
    let fine = circle_sums(&f, pole, radius, nodes)?;
    let out = LaurentCoefficients {
        pole,
        c_0: fine[0],
        c_m1: fine[1],
        c_m2: fine[2],
        c_m3: fine[3],
        radius,
        nodes,
        doubling_change: 0.0,
    };
    let scale = out.scale().max(f64::MIN_POSITIVE);
    let change = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
        / scale;
    if !(change <= STABILITY) {
        return Err(Error::Numeric(format!(
            "Laurent sums at {pole} (radius {radius}) changed by {change:.3e} between {} and {nodes} nodes",
            nodes / 2
        )));
    }
    Ok(LaurentCoefficients {
        doubling_change: change,
        ..out
    })
}

impl KernelSpec {
    /// Laurent coefficients of F (without x^{−s}) at a real lattice pole or at a
    /// zero site, after checking that no other known singularity lies within
    /// twice the radius.
    pub fn laurent_extract(
        &self,
        pole: Complex64,
        radius: f64,
        nodes: usize,
    ) -> Result<LaurentCoefficients> {
        self.laurent_extract_among(pole, radius, nodes, &[])
    }

    /// As [`KernelSpec::laurent_extract`], with extra singular sites (zeros shifted
    /// by −m) to respect.
    pub fn laurent_extract_among(
        &self,
        pole: Complex64,
        radius: f64,
        nodes: usize,
        other_sites: &[Complex64],
    ) -> Result<LaurentCoefficients> {
        let reach = 2.0 * radius;
        // lattice of Γ poles and the ζ pole at 1 − m, all at non-positive integers
        let nearest_int = pole.re.round().min(0.0);
        for cand in [nearest_int - 1.0, nearest_int, nearest_int + 1.0] {
            if cand > 0.0 {
                continue;
            }
            let site = Complex64::new(cand, 0.0);
            let d = (site - pole).norm();
            if d > 1e-12 && d < reach {
                return Err(Error::Configuration(format!(
                    "singularity at {site} lies within 2·radius of {pole}"
                )));
            }
        }
        for site in other_sites {
            let d = (site - pole).norm();
            if d > 1e-12 && d < reach {
                return Err(Error::Configuration(format!(
                    "singularity at {site} lies within 2·radius of {pole}"
                )));
            }
        }
        let spec = *self;
        laurent_on_circle(move |s| spec.integrand(s), pole, radius, nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_complex;

    #[test]
    fn gamma_residue_at_minus_one() {
        let c = laurent_on_circle(gamma_complex, Complex64::new(-1.0, 0.0), 0.25, 256).unwrap();
        assert!((c.c_m1 + 1.0).norm() < 1e-12);
        assert!(c.c_m2.norm() < 1e-13);
    }

    #[test]
    fn known_double_pole() {
        let f = |s: Complex64| Ok((s.exp() + 2.0) / (s * s));
        let c = laurent_on_circle(f, Complex64::new(0.0, 0.0), 0.3, 128).unwrap();
        assert!((c.c_m2 - 3.0).norm() < 1e-13);
        assert!((c.c_m1 - 1.0).norm() < 1e-13);
        assert!((c.c_0 - 0.5).norm() < 1e-13);
    }

    #[test]
    fn bad_configuration() {
        let f = |s: Complex64| Ok(s);
        assert!(matches!(
            laurent_on_circle(f, Complex64::new(0.0, 0.0), 0.3, 100),
            Err(Error::Configuration(_))
        ));
    }
}
