//! Seeded deterministic generator.
//!
//! All randomness in the crate flows from a single 64-bit seed through this
//! splitmix64 generator, so sampled frames and verification reports are
//! reproducible bit-for-bit across platforms and runs.

use num_bigint::BigInt;

use crate::linalg::{Mat, Rat};

/// splitmix64 (Steele, Lea, Flood; the `SplittableRandom` finalizer).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Independent child stream; used to decorrelate per-arrow samplers.
    pub fn split(&mut self) -> SplitMix64 {
        SplitMix64::new(self.next_u64())
    }

    /// Uniform-enough integer in `lo..=hi` (modulo reduction; fine for test
    /// data, not for statistics).
    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// Small rational with numerator in `-num_max..=num_max` and denominator
    /// in `1..=den_max`.
    pub fn next_rat(&mut self, num_max: i64, den_max: i64) -> Rat {
        let n = self.next_range(-num_max, num_max);
        let d = self.next_range(1, den_max);
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    /// Matrix with small rational entries.
    pub fn next_mat(&mut self, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |_, _| self.next_rat(3, 2))
    }

    /// Invertible matrix with small rational entries, by rejection.
    pub fn next_invertible(&mut self, n: usize) -> Mat {
        loop {
            let m = self.next_mat(n, n);
            if m.is_invertible() {
                return m;
            }
        }
    }
}
