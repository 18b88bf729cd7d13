//! Random streams.
//!
//! Every stream is a ChaCha8 generator (`rand_chacha::ChaCha8Rng`) seeded
//! from a 64-bit value with `seed_from_u64`. Child seeds are derived with
//! the SplitMix64 finalizer: `child(seed, i) = mix(seed + (i + 1) * 0x9E3779B97F4A7C15)`.
//! Replicate `r` of a run with base seed `s` uses `child(s, r)`; within a
//! replicate, heavy letter `x_j` uses `child(child(s, r), j)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn child_seed(seed: u64, i: u64) -> u64 {
    mix(seed.wrapping_add(i.wrapping_add(1).wrapping_mul(GAMMA)))
}

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Seed for heavy letter `j` in replicate `r`.
pub fn letter_seed(base: u64, r: u64, j: u32) -> u64 {
    child_seed(child_seed(base, r), j as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn children_are_distinct() {
        let s: HashSet<u64> = (0..10_000).map(|r| child_seed(7, r)).collect();
        assert_eq!(s.len(), 10_000);
        assert_ne!(letter_seed(7, 0, 1), letter_seed(7, 0, 2));
        assert_ne!(letter_seed(7, 0, 1), letter_seed(7, 1, 1));
    }
}
