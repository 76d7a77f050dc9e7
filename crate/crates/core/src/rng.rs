//! Seeded random number generation.
//!
//! Every stochastic routine takes an explicit `u64` seed and builds a
//! [`ChaCha8Rng`] from it. Parallel work derives one stream per work item with
//! [`derive_seed`], so results never depend on scheduling.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a work-item index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
