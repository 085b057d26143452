//! Per-trial seed derivation.
//!
//! `derive_trial_seed(s, i)` is the SplitMix64 output for state
//! `s + (i + 1)·φ` with `φ = 0x9E3779B97F4A7C15`. `φ` is odd, so the state
//! is a bijection of `i` modulo 2^64, and the finaliser is a bijection too:
//! distinct trial indices always get distinct seeds.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    let mut z = master_seed.wrapping_add(trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
