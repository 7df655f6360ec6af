//! Seeded random-number plumbing.
//!
//! All randomness in this crate flows from explicit 64-bit seeds through
//! ChaCha8, which is seedable, fast, and bit-reproducible across platforms.
//! Independent substreams are derived by hashing `(seed, index)` with
//! SplitMix64: `substream(seed, i)` feeds `seed ^ mix(i)` through four
//! SplitMix64 steps to fill the 256-bit ChaCha key. Parallel and serial
//! evaluation of the same trial set therefore draw identical numbers no
//! matter how trials are scheduled.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by every sampler in this crate.
pub type SimRng = ChaCha8Rng;

/// One SplitMix64 output step.
#[inline]
pub fn splitmix64(state: &mut u64) {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
}

/// Finalizer for one SplitMix64 draw.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a single hashed 64-bit value from `(seed, index)`.
///
/// Used wherever a child *seed* (rather than a full generator) is needed,
/// e.g. per-sweep-point seeds keyed by the grid value.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut s = seed ^ mix(index.wrapping_add(0x517c_c1b7_2722_0a95));
    splitmix64(&mut s);
    mix(s)
}

/// Independent generator for substream `index` of `seed`.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut state = seed ^ mix(index.wrapping_add(0x517c_c1b7_2722_0a95));
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        splitmix64(&mut state);
        chunk.copy_from_slice(&mix(state).to_le_bytes());
    }
    SimRng::from_seed(key)
}
