//! Exact rational scalars, dense linear algebra with incremental rank
//! maintenance, and a rational simplex solver with dual certificates.

mod linalg;
mod lp;
mod rat;

pub use linalg::{
    center, dot, is_zero_vec, rank, solve_linear, sub_scaled, zeros, DimMismatch, EchelonState,
    Insert, QMat, QVec,
};
pub use lp::{solve_lp, LinearProgram, LpError, LpSolution, LpStatus};
pub use rat::{ParseRatError, Rat};

use num_bigint::BigUint;

/// Binomial coefficient as an arbitrary-precision integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// SplitMix64: tiny deterministic generator used for reproducible sampling.
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound` (`bound > 0`) by rejection.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        let b = bound as u64;
        let limit = u64::MAX - u64::MAX % b;
        loop {
            let x = self.next_u64();
            if x < limit {
                return (x % b) as usize;
            }
        }
    }

    /// Small random rational in `[-range, range]` with denominator ≤ 4.
    pub fn small_rat(&mut self, range: i64) -> Rat {
        let num = self.below((2 * range + 1) as usize) as i64 - range;
        let den = 1 + self.below(4) as i64;
        Rat::new(num, den)
    }
}
