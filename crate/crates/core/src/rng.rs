//! Deterministic random streams.
//!
//! Every experiment draws from `ChaCha8Rng` seeded with a 64-bit stream id.
//! Trial `i` of a run with master seed `m` uses the stream id
//! [`stream_seed(m, i)`](stream_seed), a SplitMix64 finalizer applied to
//! `m` and `i`. The derivation is fixed so results agree across machines
//! and thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used by every stream.
pub type StreamRng = ChaCha8Rng;

/// Human-readable description of the stream derivation, for provenance headers.
pub const GENERATOR: &str = "ChaCha8Rng::seed_from_u64(splitmix64(splitmix64(master) ^ index))";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream id of trial `index` under master seed `master`.
pub fn stream_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

/// Generator for a stream id.
pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}
