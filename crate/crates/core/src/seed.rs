//! Deterministic seed derivation.
//!
//! Everything random in this crate flows from explicit 64-bit seeds through
//! ChaCha8; these helpers derive independent per-item seeds so that corpora
//! and score runs reproduce bit-for-bit across platforms and worker counts.

/// SplitMix64 mixing step.
pub fn split_mix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for item `index` in a sequence governed by `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    split_mix64(seed ^ split_mix64(index))
}

/// FNV-1a hash of a byte string; folds external ids into seeds.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x1_0000_0000_01b3);
    }
    h
}
