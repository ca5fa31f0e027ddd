//! Seeded randomness for the randomized decompositions.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Nat;

/// A deterministic stream of random values.
///
/// Two sources built from the same seed produce identical streams. A source
/// is meant for a single caller; parallel workers each derive their own with
/// [`RandomSource::derive`].
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent source for worker `index` of a job seeded with `master`.
    pub fn derive(master: u64, index: u64) -> Self {
        // splitmix64 finalizer over the pair
        let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Self::new(z ^ (z >> 31))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform value in `[0, bound)`. Panics if `bound` is zero.
    pub fn uniform_below(&mut self, bound: Nat) -> Nat {
        assert!(bound > 0, "uniform_below requires a positive bound");
        self.rng.gen_range(0..bound)
    }

    /// Uniform value in `[lo, hi]`.
    pub fn uniform_inclusive(&mut self, lo: Nat, hi: Nat) -> Nat {
        assert!(lo <= hi);
        self.rng.gen_range(lo..=hi)
    }
}
