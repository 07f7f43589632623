use std::collections::HashSet;

use serde::Serialize;

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_above(n: u64) -> u64 {
    (n + 1..).find(|&x| is_prime(x)).expect("primes are unbounded")
}

/// Erdős–Turán labels `id(i) = 2pi + (i² mod p)` for `i = 1..=n`, with `p`
/// the smallest prime above `n`. Sums `id(i) + id(l)` with `i <= l` are
/// pairwise distinct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SidonTable {
    pub n: usize,
    pub p: u64,
    /// `ids[i - 1] = id(i)`.
    pub ids: Vec<u64>,
}

impl SidonTable {
    pub fn new(n: usize) -> Self {
        let p = smallest_prime_above(n as u64);
        let ids = (1..=n as u64).map(|i| 2 * p * i + (i * i) % p).collect();
        SidonTable { n, p, ids }
    }

    /// `id(i)` for 1-based `i`.
    pub fn id(&self, i: usize) -> u64 {
        self.ids[i - 1]
    }

    pub fn max_id(&self) -> u64 {
        self.ids.last().copied().unwrap_or(0)
    }

    pub fn has_distinct_pair_sums(&self) -> bool {
        let mut seen = HashSet::new();
        for i in 0..self.n {
            for l in i..self.n {
                if !seen.insert(self.ids[i] + self.ids[l]) {
                    return false;
                }
            }
        }
        true
    }
}
