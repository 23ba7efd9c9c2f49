//! Deterministic pseudo-randomness for generators and self-tests.
//!
//! Every random object in this crate is derived from a single 64-bit seed
//! through [`SplitMix64`], so failures reproduce bit-for-bit across runs and
//! platforms. The generator is the splitmix64 finalizer of Steele, Lea and
//! Flood; it is not cryptographic and is not meant to be.

/// A splitmix64 pseudo-random generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Derives an independent stream for a sub-task, so that changing the
    /// number of draws in one trial cannot shift every later trial.
    pub fn derive(&self, stream: u64) -> SplitMix64 {
        let mut base = SplitMix64::new(self.state);
        let a = base.next_u64();
        SplitMix64::new(a ^ mix(stream))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        mix(self.state)
    }

    /// Uniform value in `0..bound`; `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Modulo bias is irrelevant at the scales used here (bound << 2^64).
        self.next_u64() % bound
    }

    /// Uniform integer in the inclusive range `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + self.below(span) as i64
    }

    /// Bernoulli draw with probability `num/den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
