//! Least-squares cross-check of the residue-built model.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::upsilon::{ModelMethod, PowerLogTerm, UpsilonModel};
use crate::error::{Error, Result};

/// Columns of the design matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitBasis {
    /// 1, x, …, x^{k−1}, x^{k−1} log x.
    Standard,
    /// Standard plus x^{k+2l}, x^{k+2l} log x and x^{k+2l+1} for l = 0..=l_max.
    WithTrailing { l_max: u32 },
}

#[derive(Clone, Copy)]
enum Column {
    One,
    Pow(u32),
    PowLog(u32),
}

impl Column {
    fn eval(self, x: f64) -> f64 {
        match self {
            Column::One => 1.0,
            Column::Pow(e) => x.powi(e as i32),
            Column::PowLog(e) => x.powi(e as i32) * x.ln(),
        }
    }
}

fn columns(k: u32, basis: FitBasis) -> Vec<Column> {
    let mut cols = vec![Column::One];
    cols.extend((1..k).map(Column::Pow));
    cols.push(Column::PowLog(k - 1));
    if let FitBasis::WithTrailing { l_max } = basis {
        for l in 0..=l_max {
            cols.push(Column::Pow(k + 2 * l));
            cols.push(Column::PowLog(k + 2 * l));
            cols.push(Column::Pow(k + 2 * l + 1));
        }
    }
    cols
}

/// Fits C + Σ p_l x^l + ḣ x^{k−1} log x (plus optional trailing columns) to
/// `(x, value)` samples.
pub fn fit_upsilon(samples: &[(f64, f64)], k: u32, basis: FitBasis) -> Result<UpsilonModel> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let cols = columns(k, basis);
    if samples.len() < (2 * k as usize + 4).max(cols.len() + 1) {
        return Err(Error::Fit(format!(
            "{} samples are too few for {} unknowns",
            samples.len(),
            cols.len()
        )));
    }
    if samples.iter().any(|&(x, v)| !(x > 0.0 && x.is_finite() && v.is_finite())) {
        return Err(Error::InvalidArgument("samples need finite values at x > 0".into()));
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
    if hi / lo < 10.0 * (1.0 - 1e-9) {
        return Err(Error::Fit(format!(
            "samples span [{lo:e}, {hi:e}], less than one decade"
        )));
    }

    let mut a = DMatrix::from_fn(samples.len(), cols.len(), |i, j| cols[j].eval(samples[i].0));
    let scales: Vec<f64> = (0..cols.len()).map(|j| a.column(j).norm()).collect();
    for (j, &s) in scales.iter().enumerate() {
        if s == 0.0 {
            return Err(Error::Fit(format!("design column {j} vanishes")));
        }
        a.column_mut(j).unscale_mut(s);
    }
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|&(_, v)| v));
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-13 * smax) {
        return Err(Error::Fit(format!(
            "design matrix is rank deficient (condition {:.3e})",
            smax / smin
        )));
    }
    let sol = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::Fit(e.to_string()))?;
    let coef: Vec<f64> = sol.iter().zip(&scales).map(|(c, s)| c / s).collect();

    let mut model = UpsilonModel {
        k,
        kernel: None,
        constant: 0.0,
        poly: (1..k)
            .map(|e| PowerLogTerm {
                exponent: e,
                coeff: 0.0,
                log_coeff: 0.0,
                log2_coeff: 0.0,
            })
            .collect(),
        trailing: Vec::new(),
        l_max: match basis {
            FitBasis::Standard => 0,
            FitBasis::WithTrailing { l_max } => l_max,
        },
        method: ModelMethod::Fit,
        imaginary_leak: 0.0,
    };
    for (col, c) in cols.iter().zip(coef) {
        match *col {
            Column::One => model.constant = c,
            Column::Pow(e) if e < k => model.poly[e as usize - 1].coeff = c,
            Column::PowLog(e) if e < k => model.poly[e as usize - 1].log_coeff = c,
            Column::Pow(e) | Column::PowLog(e) => {
                let pos = match model.trailing.iter().position(|t| t.exponent == e) {
                    Some(p) => p,
                    None => {
                        model.trailing.push(PowerLogTerm {
                            exponent: e,
                            coeff: 0.0,
                            log_coeff: 0.0,
                            log2_coeff: 0.0,
                        });
                        model.trailing.len() - 1
                    }
                };
                if matches!(col, Column::Pow(_)) {
                    model.trailing[pos].coeff = c;
                } else {
                    model.trailing[pos].log_coeff = c;
                }
            }
        }
    }
    Ok(model)
}

/// One overlapping coefficient of a residue model and a fitted one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientAgreement {
    pub exponent: u32,
    /// 0 for x^e, 1 for x^e log x.
    pub log_power: u32,
    pub residue: f64,
    pub fit: f64,
    /// |fit − residue| / |residue|; absent when the residue value is a
    /// structural zero.
    pub relative: Option<f64>,
    pub structural_zero: bool,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub constant_residue: f64,
    pub constant_fit: f64,
    pub constant_agrees: bool,
    pub terms: Vec<CoefficientAgreement>,
    pub passed: bool,
}

/// Compares C and the x^e, x^e log x coefficients for e < k.
///
/// A residue coefficient below 1e-12 of the largest one is a structural zero;
/// its fitted value must then be within `rel_tol` of that largest coefficient.
pub fn compare_models(
    residue: &UpsilonModel,
    fit: &UpsilonModel,
    rel_tol: f64,
    constant_tol: f64,
) -> Result<ModelComparison> {
    if residue.k != fit.k {
        return Err(Error::InvalidArgument(format!(
            "models are for k = {} and k = {}",
            residue.k, fit.k
        )));
    }
    let k = residue.k;
    let pick = |m: &UpsilonModel, e: u32, lp: u32| {
        m.poly_term(e).map_or(0.0, |t| if lp == 0 { t.coeff } else { t.log_coeff })
    };
    let scale = (1..k)
        .flat_map(|e| [pick(residue, e, 0).abs(), pick(residue, e, 1).abs()])
        .fold(0.0f64, f64::max);
    let mut terms = Vec::new();
    for e in 1..k {
        for lp in [0u32, 1] {
            // the fit basis only carries a log column at e = k − 1
            if lp == 1 && e != k - 1 {
                continue;
            }
            let r = pick(residue, e, lp);
            let f = pick(fit, e, lp);
            let structural_zero = r.abs() <= 1e-12 * scale;
            let (relative, agrees) = if structural_zero {
                (None, (f - r).abs() <= rel_tol * scale)
            } else {
                let rel = (f - r).abs() / r.abs();
                (Some(rel), rel <= rel_tol)
            };
            terms.push(CoefficientAgreement {
                exponent: e,
                log_power: lp,
                residue: r,
                fit: f,
                relative,
                structural_zero,
                agrees,
            });
        }
    }
    let constant_agrees = (residue.constant - fit.constant).abs() <= constant_tol;
    let passed = constant_agrees && terms.iter().all(|t| t.agrees);
    Ok(ModelComparison {
        constant_residue: residue.constant,
        constant_fit: fit.constant,
        constant_agrees,
        terms,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_combination() {
        let samples: Vec<(f64, f64)> = (0..30)
            .map(|i| {
                let x = 10f64.powf(-3.0 + 2.0 * i as f64 / 29.0);
                (x, 0.3 + 2.0 * x - 5.0 * x * x.ln())
            })
            .collect();
        let m = fit_upsilon(&samples, 2, FitBasis::Standard).unwrap();
        assert!((m.constant - 0.3).abs() < 1e-12);
        assert!((m.poly[0].coeff - 2.0).abs() < 1e-12);
        assert!((m.h_dot() + 5.0).abs() < 1e-12);
    }

    #[test]
    fn comparison_flags_structural_zeros() {
        let xs: Vec<f64> = (0..30).map(|i| 10f64.powf(-4.0 + 2.0 * i as f64 / 29.0)).collect();
        let exact: Vec<(f64, f64)> = xs.iter().map(|&x| (x, 0.1 + 2.0 * x)).collect();
        let near: Vec<(f64, f64)> = xs.iter().map(|&x| (x, 0.1 + 2.04 * x + 0.05 * x * x.ln())).collect();
        let a = fit_upsilon(&exact, 2, FitBasis::Standard).unwrap();
        let b = fit_upsilon(&near, 2, FitBasis::Standard).unwrap();
        let c = compare_models(&a, &b, 0.05, 1e-4).unwrap();
        assert!(c.passed);
        assert_eq!(c.terms.len(), 2);
        assert!(c.terms[1].structural_zero);
        let c = compare_models(&a, &b, 0.01, 1e-4).unwrap();
        assert!(!c.passed);
    }

    #[test]
    fn degenerate_grid_is_an_error() {
        let samples = vec![(0.01, 1.0); 20];
        assert!(matches!(
            fit_upsilon(&samples, 2, FitBasis::Standard),
            Err(Error::Fit(_))
        ));
    }
}
