use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Largest index held by the shared table.
pub const DEFAULT_MAX: usize = 64;

/// Exact Bernoulli numbers B_0..B_max with B_1 = −1/2, plus rounded copies.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    exact: Vec<BigRational>,
    rounded: Vec<f64>,
}

impl BernoulliTable {
    /// Builds the table from Σ_{j=0}^{m} C(m+1, j) B_j = 0.
    pub fn new(max: usize) -> Self {
        let mut exact: Vec<BigRational> = Vec::with_capacity(max + 1);
        exact.push(BigRational::one());
        for m in 1..=max {
            let mut acc = BigRational::zero();
            for (j, b) in exact.iter().enumerate() {
                acc += BigRational::from_integer(binomial(m as u64 + 1, j as u64)) * b;
            }
            exact.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        let rounded = exact.iter().map(|b| b.to_f64().unwrap_or(f64::NAN)).collect();
        Self { exact, rounded }
    }

    pub fn max(&self) -> usize {
        self.exact.len() - 1
    }

    pub fn exact(&self, j: usize) -> Option<&BigRational> {
        self.exact.get(j)
    }

    pub fn value(&self, j: usize) -> Option<f64> {
        self.rounded.get(j).copied()
    }
}

pub(crate) fn table() -> &'static BernoulliTable {
    static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
    TABLE.get_or_init(|| BernoulliTable::new(DEFAULT_MAX))
}

pub fn bernoulli_number(j: usize) -> Result<BigRational> {
    table().exact(j).cloned().ok_or_else(|| {
        invalid(format!(
            "Bernoulli index {j} above the supported maximum {DEFAULT_MAX}"
        ))
    })
}

pub fn bernoulli_f64(j: usize) -> Result<f64> {
    table().value(j).ok_or_else(|| {
        invalid(format!(
            "Bernoulli index {j} above the supported maximum {DEFAULT_MAX}"
        ))
    })
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
