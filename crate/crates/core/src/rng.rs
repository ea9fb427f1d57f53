//! Seeded random streams.
//!
//! Every stochastic routine in the crate draws from [`SimRng`], which is
//! `rand_chacha::ChaCha8Rng` (rand_chacha 0.9). ChaCha output is specified
//! bit-for-bit, so a seed reproduces the same realization on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Name of the pinned generator, recorded in experiment outputs.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9)";

pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent child stream derived from a master seed (splitmix64 mixing).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
