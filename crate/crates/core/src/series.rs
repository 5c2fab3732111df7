//! Truncated Dirichlet series with periodic Bernoulli kernels.
//!
//! Every evaluation sums n = 1..N in fixed chunks; each chunk is sieved on its
//! own, summed in ascending n with Neumaier compensation, and the chunk
//! partials are combined by [`tree_reduce`]. The result is therefore the same
//! bit pattern whatever the worker count.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exec::{map_indexed, with_workers, ExecMode};
use crate::periodic_bernoulli::{frac_product, sup_bound, BernoulliPolynomial};
use crate::sieve::{Segment, SegmentedSieve};
use crate::summation::{tree_reduce, ComplexCompensatedSum, CompensatedSum};

/// Arithmetic weight a_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coefficient {
    /// μ(n) log n, Dirichlet series ζ′/ζ².
    MuLog,
    Mu,
    MuSquare,
    /// Λ(n), Dirichlet series −ζ′/ζ.
    Lambda,
    /// 2^{ω(n)}, only used on the exponential side.
    TwoOmega,
    /// ½(μ∗μ)(n) log n, Dirichlet series ζ′/ζ³.
    MuMuLog,
}

impl Coefficient {
    #[inline]
    fn weight(self, seg: &Segment, i: usize, n: f64) -> f64 {
        match self {
            Coefficient::MuLog => {
                let mu = seg.mu(i);
                if mu == 0 {
                    0.0
                } else {
                    mu as f64 * n.ln()
                }
            }
            Coefficient::Mu => seg.mu(i) as f64,
            Coefficient::MuSquare => (seg.mu(i) as f64).abs(),
            Coefficient::Lambda => seg.von_mangoldt(i),
            Coefficient::TwoOmega => (1u64 << seg.omega(i)) as f64,
            Coefficient::MuMuLog => {
                let c = seg.mu_conv_mu(i);
                if c == 0 {
                    0.0
                } else {
                    0.5 * c as f64 * n.ln()
                }
            }
        }
    }

    fn has_log(self) -> bool {
        matches!(
            self,
            Coefficient::MuLog | Coefficient::Lambda | Coefficient::MuMuLog
        )
    }
}

impl std::str::FromStr for Coefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "mulog" => Coefficient::MuLog,
            "mu" => Coefficient::Mu,
            "musquare" | "mu2" => Coefficient::MuSquare,
            "lambda" => Coefficient::Lambda,
            "twoomega" => Coefficient::TwoOmega,
            "mumulog" => Coefficient::MuMuLog,
            _ => return Err(invalid(format!("unknown coefficient kind {s:?}"))),
        })
    }
}

/// Σ a_n B̄_k(nx) / n^p, or Σ a_n B̄_1(nx)² / n^p when `squared_b1` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub coefficient: Coefficient,
    pub bernoulli_order: u32,
    pub denominator_power: u32,
    pub squared_b1: bool,
}

impl SeriesSpec {
    /// Σ μ(n) log n · B̄_k(nx) / n^k.
    pub fn mu_log(k: u32) -> Self {
        Self::standard(Coefficient::MuLog, k)
    }

    /// The coefficient paired with the ζ′/ζ² kernel: ½(μ∗μ)(n) log n.
    pub fn mu_mu_log(k: u32) -> Self {
        Self::standard(Coefficient::MuMuLog, k)
    }

    pub fn standard(coefficient: Coefficient, k: u32) -> Self {
        Self {
            coefficient,
            bernoulli_order: k,
            denominator_power: k,
            squared_b1: false,
        }
    }

    /// Σ c(n) B̄_1(nx)² / n².
    pub fn squared(coefficient: Coefficient) -> Self {
        Self {
            coefficient,
            bernoulli_order: 1,
            denominator_power: 2,
            squared_b1: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bernoulli_order == 0 || self.denominator_power == 0 {
            return Err(invalid("Bernoulli order and denominator power must be positive"));
        }
        if self.squared_b1 && self.bernoulli_order != 1 {
            return Err(invalid("squared_b1 requires Bernoulli order 1"));
        }
        if self.coefficient == Coefficient::TwoOmega {
            return Err(Error::Unsupported(
                "2^omega weights live on the exponential side; use eval_fourier_rhs".into(),
            ));
        }
        if self.coefficient.has_log() && self.bernoulli_order == 1 && !self.squared_b1 {
            return Err(Error::Unsupported(
                "order 1 with logarithmic weights converges only conditionally".into(),
            ));
        }
        Ok(())
    }

    /// sup of the kernel factor B̄_k or B̄_1².
    fn kernel_bound(&self) -> f64 {
        if self.squared_b1 {
            0.25
        } else {
            sup_bound(self.bernoulli_order)
        }
    }

    /// Proven bound on Σ_{n>N} |a_n| sup|kernel| / n^p.
    pub fn tail_bound(&self, terms: u64) -> f64 {
        let p = self.denominator_power as f64;
        if self.denominator_power <= 1 {
            return f64::INFINITY;
        }
        let n = (terms.max(2)) as f64;
        let l = n.ln();
        let q = p - 1.0;
        let head = n.powf(-q);
        let i0 = head / q;
        let i1 = head * (l / q + 1.0 / (q * q));
        let i2 = head * (l * l / q + 2.0 * l / (q * q) + 2.0 / (q * q * q));
        let coef = match self.coefficient {
            Coefficient::Mu | Coefficient::MuSquare => i0,
            Coefficient::MuLog | Coefficient::Lambda => i1,
            // |μ∗μ| ≤ d and Σ_{n≤t} d(n) ≤ t(log t + 1), by partial summation
            Coefficient::MuMuLog => 0.5 * (p * i2 + q * i1),
            Coefficient::TwoOmega => p * (i1 + i0),
        };
        coef * self.kernel_bound()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationPlan {
    pub terms: u64,
    pub chunk: u64,
    pub workers: Option<usize>,
    pub mode: ExecMode,
}

pub const DEFAULT_CHUNK: u64 = 1 << 16;

impl TruncationPlan {
    pub fn new(terms: u64) -> Self {
        Self {
            terms,
            chunk: DEFAULT_CHUNK,
            workers: None,
            mode: ExecMode::default(),
        }
    }

    pub fn with_chunk(mut self, chunk: u64) -> Self {
        self.chunk = chunk;
        self
    }

    pub fn with_workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_mode(mut self, mode: ExecMode) -> Self {
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.terms == 0 {
            return Err(invalid("number of terms must be positive"));
        }
        if self.chunk == 0 {
            return Err(invalid("chunk size must be positive"));
        }
        if self.terms > u32::MAX as u64 {
            return Err(invalid(format!("{} terms exceeds the sieve range", self.terms)));
        }
        if self.workers == Some(0) {
            return Err(invalid("worker count must be positive"));
        }
        Ok(())
    }

    fn chunk_count(&self) -> usize {
        self.terms.div_ceil(self.chunk) as usize
    }

    fn chunk_range(&self, j: usize) -> (u64, u64) {
        let lo = 1 + j as u64 * self.chunk;
        (lo, (lo + self.chunk).min(self.terms + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub spec: SeriesSpec,
    pub x: f64,
    pub value: f64,
    pub terms: u64,
    pub tail_bound: f64,
}

/// Partial sums for several x sharing one sieve pass.
#[derive(Debug, Clone, Default)]
struct Partials(Vec<CompensatedSum>);

impl crate::summation::Mergeable for Partials {
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

pub fn eval_series(spec: &SeriesSpec, x: f64, plan: &TruncationPlan) -> Result<SeriesValue> {
    Ok(eval_series_batch(spec, &[x], plan)?.remove(0))
}

/// Evaluates the series at every x in `xs` from a single pass over n.
pub fn eval_series_batch(
    spec: &SeriesSpec,
    xs: &[f64],
    plan: &TruncationPlan,
) -> Result<Vec<SeriesValue>> {
    spec.validate()?;
    plan.validate()?;
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(invalid(format!("non-finite x = {x}")));
    }
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let poly = BernoulliPolynomial::new(spec.bernoulli_order)?;
    let sieve = SegmentedSieve::new(plan.terms)?;
    let p = spec.denominator_power as i32;
    let spec_c = *spec;

    let chunk_sums = with_workers(plan.workers, || {
        map_indexed(plan.chunk_count(), plan.mode, |j| {
            let (lo, hi) = plan.chunk_range(j);
            let seg = sieve.segment(lo, hi);
            let mut ns = Vec::with_capacity(seg.len());
            let mut ws = Vec::with_capacity(seg.len());
            for i in 0..seg.len() {
                let n = seg.n(i) as f64;
                let c = spec_c.coefficient.weight(&seg, i, n);
                if c != 0.0 {
                    ns.push(n);
                    ws.push(c / n.powi(p));
                }
            }
            let sums = xs
                .iter()
                .map(|&x| {
                    let mut acc = CompensatedSum::new();
                    if spec_c.squared_b1 {
                        for (&n, &w) in ns.iter().zip(&ws) {
                            let b = poly.eval_frac(frac_product(n, x));
                            acc.add(w * b * b);
                        }
                    } else {
                        for (&n, &w) in ns.iter().zip(&ws) {
                            acc.add(w * poly.eval_frac(frac_product(n, x)));
                        }
                    }
                    acc
                })
                .collect();
            Partials(sums)
        })
    });
    let total = tree_reduce(&chunk_sums);
    let tail = spec.tail_bound(plan.terms);
    Ok(xs
        .iter()
        .zip(total.0)
        .map(|(&x, s)| SeriesValue {
            spec: *spec,
            x,
            value: s.value(),
            terms: plan.terms,
            tail_bound: tail,
        })
        .collect())
}

/// Partial sum Σ_{n≤N} 2^{ω(n)} n⁻² e^{2πinx} together with its real-combined
/// form (1/π²) Σ 2^{ω(n)} n⁻² cos(2πnx).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierValue {
    pub x: f64,
    pub sum: Complex64,
    pub real_combined: f64,
    pub terms: u64,
    /// Bound on the omitted part of `sum`; divide by π² for `real_combined`.
    pub tail_bound: f64,
}

/// Proven bound on Σ_{n>N} d(n)/n².
///
/// Partial summation with N(log N − 1) ≤ Σ_{n≤N} d(n) ≤ N(log N + 1) gives
/// (log N + 5)/N, which is below 2(1 + log N)/N once N ≥ 21.
pub fn divisor_tail_bound(terms: u64) -> f64 {
    let n = terms.max(1) as f64;
    (n.ln() + 5.0) / n
}

fn two_omega_sums(
    zs: &[Complex64],
    plan: &TruncationPlan,
) -> Result<Vec<ComplexCompensatedSum>> {
    plan.validate()?;
    let sieve = SegmentedSieve::new(plan.terms)?;
    let chunk_sums = with_workers(plan.workers, || {
        map_indexed(plan.chunk_count(), plan.mode, |j| {
            let (lo, hi) = plan.chunk_range(j);
            let seg = sieve.segment(lo, hi);
            let sums = zs
                .iter()
                .map(|&z| {
                    let mut acc = ComplexCompensatedSum::new();
                    for i in 0..seg.len() {
                        let n = seg.n(i) as f64;
                        let w = (1u64 << seg.omega(i)) as f64 / (n * n);
                        let theta = 2.0 * PI * frac_product(n, z.re);
                        let damp = (-2.0 * PI * n * z.im).exp();
                        if damp == 0.0 {
                            break;
                        }
                        acc.add(Complex64::from_polar(w * damp, theta));
                    }
                    acc
                })
                .collect();
            ComplexPartials(sums)
        })
    });
    Ok(tree_reduce(&chunk_sums).0)
}

#[derive(Debug, Clone, Default)]
struct ComplexPartials(Vec<ComplexCompensatedSum>);

impl crate::summation::Mergeable for ComplexPartials {
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

pub fn eval_fourier_rhs(x: f64, plan: &TruncationPlan) -> Result<FourierValue> {
    Ok(eval_fourier_rhs_batch(&[x], plan)?.remove(0))
}

pub fn eval_fourier_rhs_batch(xs: &[f64], plan: &TruncationPlan) -> Result<Vec<FourierValue>> {
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(invalid(format!("non-finite x = {x}")));
    }
    let zs: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let sums = two_omega_sums(&zs, plan)?;
    Ok(xs
        .iter()
        .zip(sums)
        .map(|(&x, s)| {
            let sum = s.value();
            FourierValue {
                x,
                sum,
                real_combined: sum.re / (PI * PI),
                terms: plan.terms,
                tail_bound: divisor_tail_bound(plan.terms),
            }
        })
        .collect())
}

/// ζ(2)/(12 ζ(4)) = (1/12) Σ μ²(n)/n², the constant term of f.
pub fn f_constant() -> f64 {
    let z2 = PI * PI / 6.0;
    let z4 = PI.powi(4) / 90.0;
    z2 / (12.0 * z4)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSeriesValue {
    pub z: Complex64,
    pub value: Complex64,
    pub terms: u64,
    pub tail_bound: f64,
}

/// f(z) = ζ(2)/(12ζ(4)) + π⁻² Σ 2^{ω(n)} n⁻² e^{2πinz} on Im z ≥ 0.
///
/// On the real line Re f(x) = Σ (μ(n)/n)² B̄_1(nx)².
pub fn eval_f_complex(z: Complex64, plan: &TruncationPlan) -> Result<ComplexSeriesValue> {
    Ok(eval_f_complex_batch(&[z], plan)?.remove(0))
}

pub fn eval_f_complex_batch(
    zs: &[Complex64],
    plan: &TruncationPlan,
) -> Result<Vec<ComplexSeriesValue>> {
    if let Some(z) = zs.iter().find(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(invalid(format!("non-finite z = {z}")));
    }
    if let Some(z) = zs.iter().find(|z| z.im < 0.0) {
        return Err(Error::Domain(format!(
            "the exponential series diverges for Im z < 0 (z = {z})"
        )));
    }
    let sums = two_omega_sums(zs, plan)?;
    let c0 = f_constant();
    Ok(zs
        .iter()
        .zip(sums)
        .map(|(&z, s)| ComplexSeriesValue {
            z,
            value: c0 + s.value() / (PI * PI),
            terms: plan.terms,
            tail_bound: divisor_tail_bound(plan.terms) * (-2.0 * PI * plan.terms as f64 * z.im).exp()
                / (PI * PI),
        })
        .collect())
}

/// B_k ζ′(k)/ζ²(k), the x → 0⁺ limit of Σ μ(n) log n B̄_k(nx)/n^k.
pub fn mu_log_anchor(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(invalid("the anchor needs k ≥ 2"));
    }
    let s = Complex64::new(k as f64, 0.0);
    let [z, dz, _] = crate::special::zeta_derivatives(s)?;
    let b = crate::special::bernoulli_f64(k as usize)?;
    Ok(b * (dz / (z * z)).re)
}

/// B_k ζ′(k)/ζ³(k), the x → 0⁺ limit of the ½(μ∗μ) log n series.
pub fn mu_mu_log_anchor(k: u32) -> Result<f64> {
    if k < 2 {
        return Err(invalid("the anchor needs k ≥ 2"));
    }
    let s = Complex64::new(k as f64, 0.0);
    let [z, dz, _] = crate::special::zeta_derivatives(s)?;
    let b = crate::special::bernoulli_f64(k as usize)?;
    Ok(b * (dz / (z * z * z)).re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_specs() {
        let plan = TruncationPlan::new(100);
        assert!(matches!(
            eval_series(&SeriesSpec::mu_log(1), 0.3, &plan),
            Err(Error::Unsupported(_))
        ));
        assert!(eval_series(&SeriesSpec::mu_log(2), 0.3, &TruncationPlan::new(0)).is_err());
        assert!(eval_series(&SeriesSpec::standard(Coefficient::TwoOmega, 2), 0.3, &plan).is_err());
        assert!(eval_f_complex(Complex64::new(0.1, -0.1), &plan).is_err());
    }

    #[test]
    fn small_sum_matches_direct() {
        let spec = SeriesSpec::mu_log(3);
        let plan = TruncationPlan::new(30).with_chunk(7);
        let got = eval_series(&spec, 0.37, &plan).unwrap().value;
        let mu = [0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0, 1, 1, -1, 0, 0, 1, 0, 0, -1, -1];
        let want: f64 = (1..=30)
            .map(|n| {
                let t = (n as f64 * 0.37).fract();
                mu[n] as f64 * (n as f64).ln() * (t * t * t - 1.5 * t * t + 0.5 * t)
                    / (n as f64).powi(3)
            })
            .sum();
        assert!((got - want).abs() < 1e-15, "{got} {want}");
    }

    #[test]
    fn fourier_single_term() {
        let v = eval_fourier_rhs(0.3, &TruncationPlan::new(1)).unwrap();
        let e = Complex64::from_polar(1.0, 2.0 * PI * 0.3);
        assert!((v.sum - e).norm() < 1e-15);
    }
}
