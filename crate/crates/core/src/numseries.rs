//! Certified floating-point evaluation of the Euler-product constants.
//!
//! Every constant comes back as an [`Interval`]: a monotone partial sum on one
//! side and the same sum plus a closed-form tail majorant on the other, both
//! widened by [`PAD`] to absorb rounding. Sums run in ascending term order
//! (primes descending).

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Rounding allowance added to both ends of every interval.
pub const PAD: f64 = 1.0 / (1u64 << 40) as f64;

/// Terms `p^{-m}` below this are dropped; their logs vanish in double precision.
const NEGLIGIBLE: f64 = 1e-30;

/// Rank used to stand in for `d → ∞`.
pub const SIGMA_INFINITE_RANK: u32 = 48;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumError {
    #[error("prime bound must be at least {min}, got {found}")]
    BoundTooSmall { min: u64, found: u64 },
    #[error("rank d must be at least 1")]
    ZeroRank,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper);
        Interval { lower, upper }
    }

    fn padded(lower: f64, upper: f64) -> Self {
        Interval::new(lower - PAD, upper + PAD)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }

    pub fn shift(&self, by: f64) -> Self {
        Interval::new(self.lower + by, self.upper + by)
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lower <= other.upper && other.lower <= self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSieve {
    pub bound: u64,
    /// Ascending.
    pub primes: Vec<u64>,
}

pub fn sieve(bound: u64) -> Result<PrimeSieve, NumError> {
    if bound < 2 {
        return Err(NumError::BoundTooSmall { min: 2, found: bound });
    }
    let primes = primal::Primes::all()
        .take_while(|&p| p as u64 <= bound)
        .map(|p| p as u64)
        .collect();
    Ok(PrimeSieve { bound, primes })
}

/// `η = 5/2 + Σ_{p≥3} 1/(p−1)²` with the tail `Σ_{p>N} 1/(p−1)² < 1/(N−2)`.
pub fn eta(prime_bound: u64) -> Result<Interval, NumError> {
    if prime_bound < 3 {
        return Err(NumError::BoundTooSmall { min: 3, found: prime_bound });
    }
    let primes = sieve(prime_bound)?.primes;
    let partial: f64 = primes
        .iter()
        .rev()
        .filter(|&&p| p != 2)
        .map(|&p| {
            let q = (p - 1) as f64;
            1.0 / (q * q)
        })
        .sum();
    let lower = 2.5 + partial;
    Ok(Interval::padded(lower, lower + 1.0 / (prime_bound - 2) as f64))
}

/// Cached `S_m = Σ_{p ≤ N} ln(1 − p^{−m})`, with and without `p = 2`.
struct LogSums {
    primes: Vec<u64>,
    all: Vec<Option<f64>>,
    odd: Vec<Option<f64>>,
}

impl LogSums {
    fn new(prime_bound: u64) -> Self {
        let primes = if prime_bound < 2 {
            Vec::new()
        } else {
            sieve(prime_bound).expect("bound checked").primes
        };
        LogSums {
            primes,
            all: Vec::new(),
            odd: Vec::new(),
        }
    }

    fn compute(&self, m: u32, skip_two: bool) -> f64 {
        let mut terms: Vec<f64> = Vec::new();
        for &p in &self.primes {
            if skip_two && p == 2 {
                continue;
            }
            let x = (p as f64).powi(-(m as i32));
            if x < NEGLIGIBLE {
                break;
            }
            terms.push((-x).ln_1p());
        }
        // Smallest magnitudes first.
        terms.iter().rev().sum()
    }

    fn get(&mut self, m: u32, skip_two: bool) -> f64 {
        let cache = if skip_two { &mut self.odd } else { &mut self.all };
        if cache.len() <= m as usize {
            cache.resize(m as usize + 1, None);
        }
        if let Some(v) = cache[m as usize] {
            return v;
        }
        let v = self.compute(m, skip_two);
        let cache = if skip_two { &mut self.odd } else { &mut self.all };
        cache[m as usize] = Some(v);
        v
    }

    /// `∏_{p≤N} ∏_{i=0}^{d−1} (1 − p^{i−k})`.
    fn abelian(&mut self, d: u32, k: u32) -> f64 {
        if k < d {
            return 0.0;
        }
        if self.primes.is_empty() {
            return 1.0;
        }
        let log: f64 = (0..d).map(|i| self.get(k - i, false)).sum();
        log.exp()
    }

    /// `(1 − 2^{−k}) ∏_{3≤p≤N} ∏_{i=1}^{d} (1 − p^{i−k})`.
    fn gd(&mut self, d: u32, k: u32) -> f64 {
        if k <= d {
            return 0.0;
        }
        let two = 1.0 - 0.5f64.powi(k as i32);
        let log: f64 = (1..=d).map(|i| self.get(k - i, true)).sum();
        two * log.exp()
    }
}

/// Generation probability of `∏_{p≤N} E(p, d)` by `k` elements.
pub fn abelian_p(d: u32, k: u32, prime_bound: u64) -> f64 {
    LogSums::new(prime_bound).abelian(d, k)
}

/// `(1 − 2^{−k}) ∏_{3≤p≤N} ∏_{i=1}^{d} (1 − p^{i−k})`, the generation
/// probability of the dihedral-type extension of `∏_{3≤p≤N} E(p, d)`.
pub fn gd_p(d: u32, k: u32, prime_bound: u64) -> f64 {
    LogSums::new(prime_bound).gd(d, k)
}

/// `Σ_{k>K} (1 − P(k)) ≤ 12 · 2^{−(K−d+1)}` for products of rank-`d`
/// elementary abelian groups, from `Σ_{p} p^{−j} ≤ ζ(j) − 1 ≤ 3 · 2^{−j}`.
fn k_tail(d: u32, last_k: u32) -> f64 {
    12.0 * 0.5f64.powi((last_k + 1 - d) as i32)
}

/// Number of `k` past `d` summed by [`e_abelian`]; the tail is then below `10^{-9}`.
const E_ABELIAN_TERMS: u32 = 40;

/// `e(∏_{p≤n} E(p, d))` bracketed by the partial sum and its tail.
pub fn e_abelian_interval(n: u64, d: u32) -> Result<Interval, NumError> {
    if d == 0 {
        return Err(NumError::ZeroRank);
    }
    if n < 2 {
        return Err(NumError::BoundTooSmall { min: 2, found: n });
    }
    let mut sums = LogSums::new(n);
    let last = d + E_ABELIAN_TERMS;
    let terms: Vec<f64> = (0..=last).map(|k| 1.0 - sums.abelian(d, k)).collect();
    let partial: f64 = terms.iter().rev().sum();
    Ok(Interval::padded(partial, partial + k_tail(d, last)))
}

pub fn e_abelian(n: u64, d: u32) -> Result<f64, NumError> {
    Ok(e_abelian_interval(n, d)?.midpoint())
}

/// `lim_{n→∞} e(∏_{p≤n} E(p, d))`.
///
/// In the limit `P(k) = 0` for `k ≤ d`, so the value is
/// `d + 1 + Σ_{k≥d+1} (1 − P_∞(k))`. Truncating the product at `N` raises each
/// `P(k)`; the lower end uses that, the upper end multiplies by
/// `∏_{p>N} (1 − p^{−m}) ≥ exp(−t/(1 − t))`, `t = 2 N^{1−m}/(m−1)`.
pub fn sigma_limit(d: u32, prime_bound: u64, k_extra: u32) -> Result<Interval, NumError> {
    if d == 0 {
        return Err(NumError::ZeroRank);
    }
    if prime_bound < 2 {
        return Err(NumError::BoundTooSmall { min: 2, found: prime_bound });
    }
    let mut sums = LogSums::new(prime_bound);
    let n = prime_bound as f64;
    let prime_tail = |m: u32| {
        let t = 2.0 * n.powi(1 - m as i32) / (m - 1) as f64;
        t / (1.0 - t)
    };
    let last = d + 1 + k_extra;
    let mut low_terms = Vec::new();
    let mut high_terms = Vec::new();
    for k in d + 1..=last {
        let p = sums.abelian(d, k);
        let lost: f64 = (0..d).map(|i| prime_tail(k - i)).sum();
        low_terms.push(1.0 - p);
        high_terms.push(1.0 - p * (-lost).exp());
    }
    let base = (d + 1) as f64;
    let lower = base + low_terms.iter().rev().sum::<f64>();
    let upper = base + high_terms.iter().rev().sum::<f64>() + k_tail(d, last);
    Ok(Interval::padded(lower, upper))
}

/// `lim_{d→∞} (lim_n e(∏_{p≤n} E(p, d)) − d)`.
///
/// The excess grows with `d` and differs from its limit by at most
/// `3 · 2^{−d}`; the interval uses [`SIGMA_INFINITE_RANK`] and a margin of
/// `12 · 2^{−d}`.
pub fn sigma_infinite(prime_bound: u64, k_extra: u32) -> Result<Interval, NumError> {
    let d = SIGMA_INFINITE_RANK;
    let iv = sigma_limit(d, prime_bound, k_extra)?.shift(-(d as f64));
    Ok(Interval::new(iv.lower, iv.upper + 12.0 * 0.5f64.powi(d as i32)))
}
