//! Seeding conventions.
//!
//! Every random draw in the crate goes through [`rng_from_seed`], which builds a
//! `ChaCha8Rng` (the ChaCha stream cipher with 8 rounds, as implemented by the
//! `rand_chacha` crate). ChaCha output is specified bit-for-bit, so a given seed
//! yields the same stream on every platform.
//!
//! Child seeds for sweep jobs are derived with [`derive_seed`]: the parts are
//! folded left-to-right through the SplitMix64 finalizer,
//! `h <- mix64(h ^ part + 0x9E3779B97F4A7C15)`, starting from the master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(master), |h, &part| {
        mix64((h ^ part).wrapping_add(0x9E37_79B9_7F4A_7C15))
    })
}
