//! Compensated accumulation and a fixed-shape reduction tree.
//!
//! Every long sum in the crate is accumulated chunk by chunk with
//! [`CompensatedSum`] and the per-chunk partials are combined by
//! [`tree_reduce`], whose shape depends only on the number of chunks. Results
//! are therefore bit-identical whatever the number of worker threads.

use num_complex::Complex64;

/// Kahan–Babuška (Neumaier) running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial into this one, keeping both error terms.
    #[inline]
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::ops::AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Compensated sum of complex values, real and imaginary parts separately.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexCompensatedSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexCompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    #[inline]
    pub fn merge(&mut self, other: &ComplexCompensatedSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Anything that can be combined pairwise by [`tree_reduce`].
pub trait Mergeable: Clone + Default {
    fn merge_from(&mut self, other: &Self);
}

impl Mergeable for CompensatedSum {
    fn merge_from(&mut self, other: &Self) {
        self.merge(other);
    }
}

impl Mergeable for ComplexCompensatedSum {
    fn merge_from(&mut self, other: &Self) {
        self.merge(other);
    }
}

/// Pairwise reduction with a shape fixed by `parts.len()`: adjacent pairs are
/// merged level by level, an odd tail element is carried up unchanged.
pub fn tree_reduce<T: Mergeable>(parts: &[T]) -> T {
    if parts.is_empty() {
        return T::default();
    }
    let mut level: Vec<T> = parts.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.chunks(2);
        for pair in &mut it {
            let mut acc = pair[0].clone();
            if let Some(b) = pair.get(1) {
                acc.merge_from(b);
            }
            next.push(acc);
        }
        level = next;
    }
    level.pop().unwrap_or_default()
}
