//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha20 seeded by
//! `seed_from_u64(seed)` and positioned on stream `replicate`. Replicate `i`
//! of an experiment with seed `s` always uses stream `(s, i)`, no matter
//! which worker thread runs it, so results do not depend on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Identifier written into output metadata.
pub const RNG_ALGORITHM: &str = "chacha20/seed_from_u64/stream=replicate";

pub type Rng = ChaCha20Rng;

/// The stream for replicate `replicate` of an experiment seeded with `seed`.
pub fn replicate_rng(seed: u64, replicate: u64) -> Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Derives a sub-experiment seed, e.g. one per `(α, n)` cell, by mixing the
/// cell label into the base seed with SplitMix64.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut z = seed ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
