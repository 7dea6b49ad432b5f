//! Reproducible pseudo-random numbers for randomized sweeps.
//!
//! A 64-bit linear congruential generator `s ← a·s + c (mod 2⁶⁴)` with Knuth's MMIX
//! constants `a = 6364136223846793005`, `c = 1442695040888963407`. A uniform `f64`
//! in `[0, 1)` is the top 53 bits of the new state times `2⁻⁵³`. The first draw
//! advances the state once from the seed.

pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

impl Default for Lcg64 {
    fn default() -> Self {
        Self::new(DEFAULT_SEED)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_states_from_seed() {
        let mut r = Lcg64::new(0);
        assert_eq!(r.next_u64(), LCG_INCREMENT);
        assert_eq!(
            r.next_u64(),
            LCG_INCREMENT.wrapping_mul(LCG_MULTIPLIER).wrapping_add(LCG_INCREMENT)
        );
    }

    #[test]
    fn uniform_range_and_determinism() {
        let mut a = Lcg64::default();
        let mut b = Lcg64::new(42);
        for _ in 0..1000 {
            let x = a.uniform(-2.0, 3.0);
            assert!((-2.0..3.0).contains(&x));
            assert_eq!(x, b.uniform(-2.0, 3.0));
        }
    }
}
