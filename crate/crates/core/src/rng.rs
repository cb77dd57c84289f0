//! Fixed-seed linear congruential generator.
//!
//! The recurrence is Knuth's MMIX LCG,
//! `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
//! with the seed used as the initial state. Floats take the top 53 bits of the
//! new state. Any implementation of these three lines reproduces every random
//! fixture and test vector in this crate bit for bit.

#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in `0..n` (`n > 0`).
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_outputs_are_pinned() {
        let mut rng = Lcg64::new(0);
        assert_eq!(rng.next_u64(), Lcg64::INCREMENT);
        assert_eq!(
            rng.next_u64(),
            Lcg64::INCREMENT
                .wrapping_mul(Lcg64::MULTIPLIER)
                .wrapping_add(Lcg64::INCREMENT)
        );
    }

    #[test]
    fn floats_stay_in_unit_interval() {
        let mut rng = Lcg64::new(42);
        for _ in 0..10_000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
            assert!(rng.below(7) < 7);
        }
    }
}
