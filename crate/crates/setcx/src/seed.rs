//! Deterministic seeding utilities.
//!
//! Every stochastic component in the crate draws from a [`ChaCha8Rng`] seeded
//! either directly by the user or through [`derive_seed`], which mixes a
//! master seed with a stream label and indices. Replicates, networks, and
//! search restarts each own an independent derived stream, so parallel and
//! serial execution schedules produce bit-identical results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer: a bijective 64-bit mixer with good avalanche
/// behavior, used to derive child seeds from a master seed plus indices.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent child seed from a master seed, a stream label
/// (one per logical purpose, e.g. `"noise-cal"` vs `"noise-base"`), and up
/// to two indices (e.g. replicate number, step number).
///
/// The derivation chains SplitMix64 over the label bytes and the indices;
/// distinct (label, a, b) triples yield statistically independent ChaCha
/// streams.
pub fn derive_seed(master: u64, label: &str, a: u64, b: u64) -> u64 {
    let mut s = splitmix64(master ^ 0xd1b5_4a32_d192_ed03);
    for chunk in label.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        s = splitmix64(s ^ u64::from_le_bytes(word));
    }
    s = splitmix64(s ^ a);
    splitmix64(s ^ b)
}

/// Constructs the crate's reference RNG (ChaCha with 8 rounds) from a seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
