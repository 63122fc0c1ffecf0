//! Deterministic random streams keyed on `(seed, purpose tag, index)`.
//!
//! Every consumer of randomness derives its own counter-based stream, so
//! results are independent of scheduling and worker count. ChaCha is itself a
//! counter-mode generator; the key is expanded from the three inputs with
//! SplitMix64 so that distinct purposes never share a stream.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xCBF2_9CE4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x1000_0000_01B3);
    }
    hash
}

/// A ChaCha8 stream for the given seed, purpose tag, and index.
pub fn stream(seed: u64, tag: &str, index: u64) -> ChaCha8Rng {
    let mut state = seed ^ fnv1a(tag.as_bytes()).rotate_left(1) ^ index.wrapping_mul(0xA24B_AED4_963E_E407);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// A stream additionally keyed on float parameters (e.g. `(γ, ε)` scans).
pub fn stream_keyed(seed: u64, tag: &str, floats: &[f64], index: u64) -> ChaCha8Rng {
    let mut mix = seed;
    for &x in floats {
        mix = mix.rotate_left(7) ^ x.to_bits();
        let _ = splitmix64(&mut mix);
    }
    stream(mix, tag, index)
}

/// Uniform f64 in `[0, 1)` built from the top 53 bits of the next word.
#[inline]
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
