//! Non-trivial zeros of ζ and the explicit-formula sum over them.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{Kernel, KernelSpec, LaurentCoefficients, UpsilonModel, DEFAULT_NODES};
use crate::error::{invalid, Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::series::SeriesValue;
use crate::special::zeta;
use crate::summation::CompensatedSum;

/// Entries checked against ζ on ingestion.
pub const SPOT_CHECK: usize = 10;
const SPOT_TOLERANCE: f64 = 1e-6;
/// Default number of zeros in explicit sums.
pub const DEFAULT_ZERO_BUDGET: usize = 100;
/// Ordinates above this are not used.
pub const MAX_HEIGHT: f64 = 250.0;
const MAX_ZERO_RADIUS: f64 = 0.5;

const BUNDLED: &str = include_str!("../data/zeros.txt");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    pub ordinates: Vec<f64>,
    pub source: String,
}

impl ZeroTable {
    /// The first 200 ordinates shipped with the crate.
    pub fn bundled() -> Self {
        parse_zeros(BUNDLED, "<bundled>").expect("bundled table is valid")
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// ρ_j = 1/2 + iγ_j.
    pub fn rho(&self, j: usize) -> Complex64 {
        Complex64::new(0.5, self.ordinates[j])
    }

    /// Distance from γ_j to its nearest tabulated neighbour.
    fn gap(&self, j: usize) -> f64 {
        let g = self.ordinates[j];
        let below = if j > 0 { g - self.ordinates[j - 1] } else { 2.0 * g };
        let above = self.ordinates.get(j + 1).map_or(f64::INFINITY, |n| n - g);
        below.min(above)
    }
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Ingestion {
        source_name: name.clone(),
        line: 0,
        message: e.to_string(),
    })?;
    parse_zeros(&text, &name)
}

/// Parses one ordinate per line; blank lines and lines starting with '#' are skipped.
pub fn parse_zeros(text: &str, source_name: &str) -> Result<ZeroTable> {
    let fail = |line: usize, message: String| Error::Ingestion {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut ordinates = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| fail(i + 1, format!("not a number: {line:?}")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(fail(i + 1, format!("ordinate {v} must be positive")));
        }
        if let Some(&prev) = ordinates.last() {
            if v <= prev {
                return Err(fail(
                    i + 1,
                    format!("ordinate {v} does not increase (previous {prev})"),
                ));
            }
        }
        ordinates.push(v);
        lines.push(i + 1);
    }
    if ordinates.is_empty() {
        return Err(fail(0, "no ordinates found".into()));
    }
    if !(14.13..14.14).contains(&ordinates[0]) {
        return Err(fail(
            lines[0],
            format!("first ordinate {} is not the first zero", ordinates[0]),
        ));
    }
    for (j, &g) in ordinates.iter().enumerate().take(SPOT_CHECK) {
        let z = zeta(Complex64::new(0.5, g)).map_err(|e| fail(lines[j], e.to_string()))?;
        if z.norm() > SPOT_TOLERANCE {
            return Err(fail(
                lines[j],
                format!("|ζ(1/2 + i·{g})| = {:.3e} is not a zero", z.norm()),
            ));
        }
    }
    Ok(ZeroTable {
        ordinates,
        source: source_name.to_string(),
    })
}

/// Laurent data of the integrand at s = ρ − k for each tabulated zero.
#[derive(Debug, Clone)]
pub struct ZeroResidues {
    pub k: u32,
    pub kernel: Kernel,
    pub coefficients: Vec<LaurentCoefficients>,
}

impl ZeroResidues {
    /// Prepares the first `count` zeros. For ζ′/ζ the residue is the closed
    /// form; for ζ′/ζ² the double pole is extracted on a circle of radius
    /// min(gap/2, 1/2).
    pub fn prepare(k: u32, kernel: Kernel, table: &ZeroTable, count: usize) -> Result<Self> {
        if k < 2 {
            return Err(invalid("zero sums need k ≥ 2"));
        }
        if count > table.len() {
            return Err(invalid(format!(
                "{count} zeros requested, table has {}",
                table.len()
            )));
        }
        if let Some(&g) = table.ordinates[..count].iter().find(|&&g| g > MAX_HEIGHT) {
            return Err(Error::UnsupportedRange(format!(
                "ordinate {g} above the supported height {MAX_HEIGHT}"
            )));
        }
        let spec = KernelSpec::new(k, kernel)?;
        let zero = Complex64::new(0.0, 0.0);
        let results = map_indexed(count, ExecMode::default(), |j| -> Result<LaurentCoefficients> {
            let pole = table.rho(j) - k as f64;
            match kernel {
                Kernel::ZetaPrimeOverZeta => {
                    let c = spec.normalization() * spec.archimedean(pole)?;
                    Ok(LaurentCoefficients {
                        pole,
                        c_m3: zero,
                        c_m2: zero,
                        c_m1: c,
                        c_0: zero,
                        radius: 0.0,
                        nodes: 0,
                        doubling_change: 0.0,
                    })
                }
                Kernel::ZetaPrimeOverZetaSquared => {
                    let radius = (0.5 * table.gap(j)).min(MAX_ZERO_RADIUS);
                    let mut neighbours = Vec::new();
                    if j > 0 {
                        neighbours.push(table.rho(j - 1) - k as f64);
                    }
                    if j + 1 < table.len() {
                        neighbours.push(table.rho(j + 1) - k as f64);
                    }
                    spec.laurent_extract_among(pole, radius, DEFAULT_NODES, &neighbours)
                }
                Kernel::Zeta => Err(invalid("ζ has no poles at its zeros")),
            }
        });
        let coefficients = results.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self {
            k,
            kernel,
            coefficients,
        })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Sum over the first `count` zeros and their conjugates at x.
    pub fn sum(&self, x: f64, count: usize) -> Result<ZeroSumValue> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(invalid(format!("x = {x} must be positive")));
        }
        if count > self.len() {
            return Err(invalid(format!(
                "{count} zeros requested, {} prepared",
                self.len()
            )));
        }
        let mut re = CompensatedSum::new();
        let mut im = CompensatedSum::new();
        let mut magnitudes = Vec::with_capacity(count);
        for c in &self.coefficients[..count] {
            let t = c.residue_with_power(x);
            // the conjugate zero contributes the conjugate term
            re.add(2.0 * t.re);
            let pair = t + t.conj();
            im.add(pair.im);
            magnitudes.push(2.0 * t.norm());
        }
        Ok(ZeroSumValue {
            k: self.k,
            kernel: self.kernel,
            x,
            value: re.value(),
            imaginary: im.value(),
            zeros_used: count,
            magnitudes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSumValue {
    pub k: u32,
    pub kernel: Kernel,
    pub x: f64,
    pub value: f64,
    pub imaginary: f64,
    pub zeros_used: usize,
    pub magnitudes: Vec<f64>,
}

pub fn zero_sum(
    k: u32,
    x: f64,
    table: &ZeroTable,
    count: usize,
    kernel: Kernel,
) -> Result<ZeroSumValue> {
    ZeroResidues::prepare(k, kernel, table, count)?.sum(x, count)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitCheck {
    pub k: u32,
    pub kernel: Kernel,
    pub x: Vec<f64>,
    pub series: Vec<f64>,
    pub model: Vec<f64>,
    pub budgets: Vec<usize>,
    /// discrepancy[b][i] = series − model − zero sum with budgets[b] zeros, at x[i].
    pub discrepancy: Vec<Vec<f64>>,
    /// Root-mean-square of each discrepancy row.
    pub l2: Vec<f64>,
}

/// Series minus (C + Υ + trailing + zero sum) across zero budgets.
pub fn explicit_check(
    k: u32,
    kernel: Kernel,
    table: &ZeroTable,
    budgets: &[usize],
    model: &UpsilonModel,
    series: &[SeriesValue],
) -> Result<ExplicitCheck> {
    if model.k != k || model.kernel != Some(kernel) {
        return Err(invalid("model was built for a different k or kernel"));
    }
    let want = kernel
        .series_spec(k)
        .ok_or_else(|| invalid("kernel has no series"))?;
    if let Some(s) = series.iter().find(|s| s.spec != want) {
        return Err(invalid(format!(
            "series sample at x = {} uses {:?}, expected {:?}",
            s.x, s.spec, want
        )));
    }
    let max_j = budgets.iter().copied().max().unwrap_or(0);
    let residues = ZeroResidues::prepare(k, kernel, table, max_j)?;
    let x: Vec<f64> = series.iter().map(|s| s.x).collect();
    let values: Vec<f64> = series.iter().map(|s| s.value).collect();
    let model_v: Vec<f64> = x.iter().map(|&v| model.eval(v)).collect();
    let mut discrepancy = Vec::with_capacity(budgets.len());
    let mut l2 = Vec::with_capacity(budgets.len());
    for &j in budgets {
        let row = x
            .iter()
            .zip(&values)
            .zip(&model_v)
            .map(|((&xi, s), m)| Ok(s - m - residues.sum(xi, j)?.value))
            .collect::<Result<Vec<f64>>>()?;
        l2.push((row.iter().map(|d| d * d).sum::<f64>() / row.len().max(1) as f64).sqrt());
        discrepancy.push(row);
    }
    Ok(ExplicitCheck {
        k,
        kernel,
        x,
        series: values,
        model: model_v,
        budgets: budgets.to_vec(),
        discrepancy,
        l2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_published_ordinates() {
        let t = parse_zeros("14.134725142\n21.022039639\n25.010857580", "t").unwrap();
        assert_eq!(t.len(), 3);
        assert!((t.ordinates[0] - 14.1347).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(parse_zeros("", "t"), Err(Error::Ingestion { line: 0, .. })));
        assert!(matches!(
            parse_zeros("# only a comment\n", "t"),
            Err(Error::Ingestion { .. })
        ));
        assert!(matches!(
            parse_zeros("14.134725142\nabc", "t"),
            Err(Error::Ingestion { line: 2, .. })
        ));
        assert!(matches!(
            parse_zeros("21.0\n14.1", "t"),
            Err(Error::Ingestion { line: 2, .. })
        ));
        assert!(matches!(
            parse_zeros("14.135", "t"),
            Err(Error::Ingestion { line: 1, .. })
        ));
    }

    #[test]
    fn bundled_table_loads() {
        let t = ZeroTable::bundled();
        assert_eq!(t.len(), 200);
    }
}
