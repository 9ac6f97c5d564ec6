//! Small deterministic RNG for seeded test lattices and oracle trials.
//!
//! SplitMix64: tiny, allocation-free, identical output on every platform.

use crate::rat::Rat;
use num_bigint::BigInt;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (n > 0).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// Random rational with numerator in `-max..=max` and denominator in
    /// `1..=max`.
    pub fn rat_signed(&mut self, max: u64) -> Rat {
        let n = self.below(2 * max + 1) as i64 - max as i64;
        let d = self.below(max) + 1;
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    /// Random nonnegative rational with numerator in `0..=max`.
    pub fn rat_nonneg(&mut self, max: u64) -> Rat {
        let n = self.below(max + 1);
        let d = self.below(max) + 1;
        Rat::new(BigInt::from(n), BigInt::from(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..10 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
