use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};

/// Keyed SplitMix64 stream used by every generator.
///
/// Independent streams are derived from `(seed, tag)`: the seed's first
/// SplitMix64 output is xored with the FNV-1a hash of the tag, and the
/// result seeds a fresh SplitMix64.
#[derive(Debug, Clone)]
pub struct SplitMix64(rand_xoshiro::SplitMix64);

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(rand_xoshiro::SplitMix64::seed_from_u64(seed))
    }

    pub fn keyed(seed: u64, tag: &str) -> Self {
        let first = SplitMix64::new(seed).next_u64();
        SplitMix64::new(first ^ fnv1a(tag))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        self.0.random_range(0..bound)
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        xs.shuffle(&mut self.0);
    }

    pub fn permutation(&mut self, m: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..m).collect();
        self.shuffle(&mut p);
        p
    }
}
