//! Möbius function, distinct-prime counts and related multiplicative data.
//!
//! [`build_sieve`] materialises μ(n) and ω(n) for `1..=limit` with a linear
//! (Euler) sieve. [`SegmentedSieve`] produces the same data one window at a
//! time from a prime list up to √limit, so that series with 10⁸–10⁹ terms
//! never hold a full-range table; it also yields (μ∗μ)(n) and Λ(n), which
//! need prime exponents.

use crate::error::{invalid, Error, Result};

/// Default ceiling on the bytes a full table may allocate.
pub const DEFAULT_MEMORY_CAP: usize = 4 << 30;

#[derive(Debug, Clone, Copy)]
pub struct SieveConfig {
    pub memory_cap_bytes: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            memory_cap_bytes: DEFAULT_MEMORY_CAP,
        }
    }
}

/// One n with the arithmetic data the series need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArithmeticTerm {
    pub n: u64,
    pub mu: i8,
    pub omega: u8,
    pub log_n: f64,
}

/// μ(n) and ω(n) for every `1 ≤ n ≤ limit`. Immutable once built.
#[derive(Debug, Clone)]
pub struct SieveTable {
    limit: u64,
    // index 0 is unused
    mu: Vec<i8>,
    omega: Vec<u8>,
}

pub fn build_sieve(limit: u64) -> Result<SieveTable> {
    build_sieve_with(limit, &SieveConfig::default())
}

pub fn build_sieve_with(limit: u64, config: &SieveConfig) -> Result<SieveTable> {
    if limit == 0 {
        return Err(invalid("sieve limit must be at least 1"));
    }
    if limit > u32::MAX as u64 {
        return Err(invalid(format!("sieve limit {limit} exceeds 2^32-1")));
    }
    let needed = estimated_table_bytes(limit);
    if needed > config.memory_cap_bytes {
        return Err(Error::ResourceLimit(format!(
            "a table up to {limit} needs about {needed} bytes, cap is {}",
            config.memory_cap_bytes
        )));
    }

    let n = limit as usize;
    let mut mu = vec![0i8; n + 1];
    let mut omega = vec![0u8; n + 1];
    mu[1] = 1;
    let mut primes: Vec<u32> = Vec::with_capacity(prime_count_upper(limit));
    for i in 2..=n {
        if omega[i] == 0 {
            primes.push(i as u32);
            mu[i] = -1;
            omega[i] = 1;
        }
        let (mi, oi) = (mu[i], omega[i]);
        let i32v = i as u32;
        for &p in &primes {
            let ip = i * p as usize;
            if ip > n {
                break;
            }
            if i32v % p == 0 {
                mu[ip] = 0;
                omega[ip] = oi;
                break;
            }
            mu[ip] = -mi;
            omega[ip] = oi + 1;
        }
    }
    Ok(SieveTable { limit, mu, omega })
}

fn prime_count_upper(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize + 8
}

fn estimated_table_bytes(limit: u64) -> usize {
    2 * (limit as usize + 1) + 4 * prime_count_upper(limit)
}

impl SieveTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// μ(n); `None` outside `1..=limit`.
    pub fn mu(&self, n: u64) -> Option<i8> {
        (n >= 1 && n <= self.limit).then(|| self.mu[n as usize])
    }

    pub fn omega(&self, n: u64) -> Option<u8> {
        (n >= 1 && n <= self.limit).then(|| self.omega[n as usize])
    }

    /// μ(1), …, μ(limit).
    pub fn mu_values(&self) -> &[i8] {
        &self.mu[1..]
    }

    /// ω(1), …, ω(limit).
    pub fn omega_values(&self) -> &[u8] {
        &self.omega[1..]
    }

    pub fn lookup_term(&self, n: u64) -> Result<ArithmeticTerm> {
        if n == 0 || n > self.limit {
            return Err(invalid(format!(
                "n = {n} outside the table range 1..={}",
                self.limit
            )));
        }
        Ok(ArithmeticTerm {
            n,
            mu: self.mu[n as usize],
            omega: self.omega[n as usize],
            log_n: (n as f64).ln(),
        })
    }

    /// Mertens function M(n) = Σ_{m≤n} μ(m).
    pub fn mertens(&self, n: u64) -> i64 {
        let n = n.min(self.limit) as usize;
        self.mu[1..=n].iter().map(|&m| m as i64).sum()
    }
}

/// Primes up to `bound` by a plain sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u32> {
    if bound < 2 {
        return Vec::new();
    }
    let b = bound as usize;
    let mut composite = vec![false; b + 1];
    let mut out = Vec::new();
    for i in 2..=b {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= b {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Window sieve over `[lo, hi)` driven by the primes up to √limit.
#[derive(Debug, Clone)]
pub struct SegmentedSieve {
    limit: u64,
    primes: Vec<u32>,
}

impl SegmentedSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit == 0 {
            return Err(invalid("sieve limit must be at least 1"));
        }
        if limit > u32::MAX as u64 {
            return Err(invalid(format!("sieve limit {limit} exceeds 2^32-1")));
        }
        Ok(Self {
            limit,
            primes: primes_up_to(isqrt(limit)),
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Sieves `[lo, hi)`; the window is clipped to `1..=limit`.
    pub fn segment(&self, lo: u64, hi: u64) -> Segment {
        let lo = lo.max(1);
        let hi = hi.min(self.limit + 1).max(lo);
        let len = (hi - lo) as usize;
        let mut prod = vec![1u32; len];
        let mut omega = vec![0u8; len];
        let mut single = vec![0u8; len];
        let mut max_exp = vec![0u8; len];
        let mut prime = vec![0u32; len];
        let top = hi.saturating_sub(1);

        for &p in &self.primes {
            let p64 = p as u64;
            if p64 * p64 > top {
                break;
            }
            let first = lo.div_ceil(p64) * p64;
            let mut m = first;
            while m < hi {
                let i = (m - lo) as usize;
                prod[i] *= p;
                omega[i] += 1;
                single[i] += 1;
                prime[i] = p;
                if max_exp[i] == 0 {
                    max_exp[i] = 1;
                }
                m += p64;
            }
            let mut pe = p64 * p64;
            let mut e = 2u8;
            while pe <= top {
                let mut m = lo.div_ceil(pe) * pe;
                while m < hi {
                    let i = (m - lo) as usize;
                    prod[i] *= p;
                    if e == 2 {
                        single[i] -= 1;
                    }
                    if max_exp[i] < e.min(3) {
                        max_exp[i] = e.min(3);
                    }
                    m += pe;
                }
                pe *= p64;
                e = e.saturating_add(1);
            }
        }
        for i in 0..len {
            let n = lo + i as u64;
            if prod[i] as u64 != n {
                // one prime factor above √hi remains, necessarily to the first power
                let q = n / prod[i] as u64;
                omega[i] += 1;
                single[i] += 1;
                prime[i] = q as u32;
                if max_exp[i] == 0 {
                    max_exp[i] = 1;
                }
            }
        }
        Segment {
            start: lo,
            omega,
            single,
            max_exp,
            prime,
        }
    }
}

/// Arithmetic data for a contiguous window of n.
#[derive(Debug, Clone)]
pub struct Segment {
    start: u64,
    omega: Vec<u8>,
    single: Vec<u8>,
    max_exp: Vec<u8>,
    prime: Vec<u32>,
}

impl Segment {
    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    #[inline]
    pub fn n(&self, i: usize) -> u64 {
        self.start + i as u64
    }

    #[inline]
    pub fn mu(&self, i: usize) -> i8 {
        if self.max_exp[i] >= 2 {
            0
        } else if self.omega[i] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn omega(&self, i: usize) -> u8 {
        self.omega[i]
    }

    /// Dirichlet square of μ: multiplicative with −2, 1, 0 at p, p², p^{≥3}.
    #[inline]
    pub fn mu_conv_mu(&self, i: usize) -> i32 {
        if self.max_exp[i] >= 3 {
            0
        } else {
            let mag = 1i32 << self.single[i];
            if self.single[i] % 2 == 0 {
                mag
            } else {
                -mag
            }
        }
    }

    /// von Mangoldt Λ(n).
    #[inline]
    pub fn von_mangoldt(&self, i: usize) -> f64 {
        if self.omega[i] == 1 {
            (self.prime[i] as f64).ln()
        } else {
            0.0
        }
    }

    pub fn term(&self, i: usize) -> ArithmeticTerm {
        let n = self.n(i);
        ArithmeticTerm {
            n,
            mu: self.mu(i),
            omega: self.omega[i],
            log_n: (n as f64).ln(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ArithmeticTerm> + '_ {
        (0..self.len()).map(|i| self.term(i))
    }
}

/// Batches of terms covering `1..=limit` in order, each batch sieved on its own.
pub fn stream_segments(
    limit: u64,
    segment_size: u64,
) -> Result<impl Iterator<Item = Vec<ArithmeticTerm>>> {
    if segment_size < 2 {
        return Err(invalid("segment size must be at least 2"));
    }
    let sieve = SegmentedSieve::new(limit)?;
    let count = limit.div_ceil(segment_size);
    Ok((0..count).map(move |j| {
        let lo = 1 + j * segment_size;
        sieve.segment(lo, lo + segment_size).terms().collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn small_values() {
        let t = build_sieve(10).unwrap();
        assert_eq!(t.mu_values(), &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        let t6 = build_sieve(6).unwrap();
        assert_eq!(t6.omega_values(), &[0, 1, 1, 1, 1, 2]);
        assert_eq!(build_sieve(1).unwrap().mu_values(), &[1]);
    }

    #[test]
    fn lookup() {
        let t = build_sieve(100).unwrap();
        let a = t.lookup_term(60).unwrap();
        assert_eq!((a.mu, a.omega), (0, 3));
        let b = t.lookup_term(30).unwrap();
        assert_eq!((b.mu, b.omega), (-1, 3));
        let one = t.lookup_term(1).unwrap();
        assert_eq!((one.mu, one.omega, one.log_n), (1, 0, 0.0));
        assert!(matches!(t.lookup_term(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(t.lookup_term(101), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn argument_errors() {
        assert!(matches!(build_sieve(0), Err(Error::InvalidArgument(_))));
        let tiny = SieveConfig {
            memory_cap_bytes: 1000,
        };
        assert!(matches!(
            build_sieve_with(10_000, &tiny),
            Err(Error::ResourceLimit(_))
        ));
        assert!(stream_segments(10, 1).is_err());
    }

    #[test]
    fn segment_extras_match_factorisation() {
        let s = SegmentedSieve::new(5000).unwrap();
        let seg = s.segment(1, 5001);
        for i in 0..seg.len() {
            let n = seg.n(i);
            let f = factor(n);
            let lambda = if f.len() == 1 { (f[0].0 as f64).ln() } else { 0.0 };
            assert_eq!(seg.von_mangoldt(i), lambda, "Λ({n})");
            let mm: i32 = f
                .iter()
                .map(|&(_, e)| match e {
                    1 => -2,
                    2 => 1,
                    _ => 0,
                })
                .product();
            assert_eq!(seg.mu_conv_mu(i), mm, "(μ∗μ)({n})");
        }
    }

    #[test]
    fn stream_batches() {
        let full = build_sieve(100).unwrap();
        let batches: Vec<_> = stream_segments(100, 10).unwrap().collect();
        assert_eq!(batches.len(), 10);
        let flat: Vec<_> = batches.into_iter().flatten().collect();
        assert_eq!(flat.len(), 100);
        for t in &flat {
            assert_eq!(Some(t.mu), full.mu(t.n));
            assert_eq!(Some(t.omega), full.omega(t.n));
        }
        let one: Vec<_> = stream_segments(5, 100).unwrap().collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].len(), 5);
    }
}
