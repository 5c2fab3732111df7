//! Growth exponent of series − model as x → 0⁺.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::kernel::Kernel;
use super::upsilon::UpsilonModel;
use crate::error::{Error, Result};

/// Width of an envelope bin in decades.
const BIN_DECADES: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub k: u32,
    pub kernel: Option<Kernel>,
    pub x: Vec<f64>,
    pub series: Vec<f64>,
    pub model: Vec<f64>,
    pub residual: Vec<f64>,
    pub tail_bound: Vec<f64>,
    /// (x, |residual|) at the largest |residual| of each half-decade bin.
    pub envelope: Vec<(f64, f64)>,
    pub exponent: f64,
    /// Half-width of the 95% t-interval for the exponent.
    pub exponent_ci: f64,
    pub intercept: f64,
}

/// Slope of log envelope against log x, with its 95% half-width and intercept.
pub fn envelope_fit(x: &[f64], residual: &[f64]) -> Result<(Vec<(f64, f64)>, f64, f64, f64)> {
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min).log10();
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max).log10();
    let bins = (((hi - lo) / BIN_DECADES) - 1e-9).ceil().max(1.0) as usize;
    let mut best: Vec<Option<(f64, f64)>> = vec![None; bins];
    for (&xi, &ri) in x.iter().zip(residual) {
        let b = (((xi.log10() - lo) / BIN_DECADES) as usize).min(bins - 1);
        let r = ri.abs();
        if r > 0.0 && best[b].is_none_or(|(_, cur)| r > cur) {
            best[b] = Some((xi, r));
        }
    }
    let envelope: Vec<(f64, f64)> = best.into_iter().flatten().collect();
    if envelope.len() < 3 {
        return Err(Error::Fit(format!(
            "{} non-empty envelope bins; need at least 3",
            envelope.len()
        )));
    }
    let n = envelope.len() as f64;
    let u: Vec<f64> = envelope.iter().map(|p| p.0.ln()).collect();
    let v: Vec<f64> = envelope.iter().map(|p| p.1.ln()).collect();
    let mu = u.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let sxx: f64 = u.iter().map(|a| (a - mu).powi(2)).sum();
    let sxy: f64 = u.iter().zip(&v).map(|(a, b)| (a - mu) * (b - mv)).sum();
    let slope = sxy / sxx;
    let intercept = mv - slope * mu;
    let sse: f64 = u
        .iter()
        .zip(&v)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let dof = n - 2.0;
    let se = (sse / dof / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof)
        .map_err(|e| Error::Fit(e.to_string()))?
        .inverse_cdf(0.975);
    Ok((envelope, slope, t * se, intercept))
}

/// Compares `series` samples against `model` and measures how fast the
/// difference vanishes.
pub fn residual_exponent(
    x: &[f64],
    series: &[f64],
    tail_bound: &[f64],
    model: &UpsilonModel,
) -> Result<ResidualReport> {
    if x.len() != series.len() || x.len() != tail_bound.len() {
        return Err(Error::InvalidArgument("sample arrays differ in length".into()));
    }
    if x.len() < 10 {
        return Err(Error::InvalidArgument(format!(
            "{} samples; need at least 10",
            x.len()
        )));
    }
    if x.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument("x must be positive and finite".into()));
    }
    let model_v: Vec<f64> = x.iter().map(|&v| model.eval(v)).collect();
    let residual: Vec<f64> = series.iter().zip(&model_v).map(|(s, m)| s - m).collect();
    if residual.iter().all(|&r| r == 0.0) {
        return Err(Error::Fit("all residuals vanish".into()));
    }
    if residual
        .iter()
        .zip(tail_bound)
        .all(|(r, t)| r.abs() <= 10.0 * t)
    {
        return Err(Error::InsufficientPrecision(
            "every residual is within 10× the truncation bound; increase N".into(),
        ));
    }
    let (envelope, exponent, exponent_ci, intercept) = envelope_fit(x, &residual)?;
    Ok(ResidualReport {
        k: model.k,
        kernel: model.kernel,
        x: x.to_vec(),
        series: series.to_vec(),
        model: model_v,
        residual,
        tail_bound: tail_bound.to_vec(),
        envelope,
        exponent,
        exponent_ci,
        intercept,
    })
}

/// n log-spaced points from lo to hi inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}
