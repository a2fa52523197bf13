//! Deterministic random streams.
//!
//! Every stochastic quantity is drawn from a ChaCha8 stream whose seed is a
//! hash of `(master seed, context...)`, so results do not depend on the order
//! in which trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the substream identified by `keys` under `master`.
pub fn substream_seed(master: u64, keys: &[u64]) -> u64 {
    keys.iter().fold(mix64(master), |acc, k| mix64(acc ^ mix64(*k)))
}

pub fn stream(master: u64, keys: &[u64]) -> StreamRng {
    ChaCha8Rng::seed_from_u64(substream_seed(master, keys))
}
