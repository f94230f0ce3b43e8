//! Deterministic random substreams.
//!
//! Every random stream is keyed by `(root seed, label, index)`:
//!
//! ```text
//! s0 = splitmix64(root)
//! s1 = splitmix64(s0 ^ fnv1a64(label))
//! s2 = splitmix64(s1 ^ index)
//! key = le_bytes(splitmix64 outputs 1..=4 seeded at s2)
//! ```
//!
//! and the 32-byte key seeds a ChaCha8 stream. The derivation is a pure
//! function of its inputs, so any batch can be regenerated in isolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One SplitMix64 step: advance the state and return the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    mix(*state)
}

pub fn fnv1a64(label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// 64-bit key of the substream `(root, label, index)`.
pub fn substream_key(root: u64, label: &str, index: u64) -> u64 {
    let mut s = root;
    let s0 = splitmix64(&mut s);
    let mut s = s0 ^ fnv1a64(label);
    let s1 = splitmix64(&mut s);
    let mut s = s1 ^ index;
    splitmix64(&mut s)
}

pub fn substream(root: u64, label: &str, index: u64) -> Stream {
    let mut state = substream_key(root, label, index);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
