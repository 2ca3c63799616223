//! Seed derivation for reproducible, order-independent sampling.
//!
//! Episode-level seeds are derived by mixing a run seed with the episode
//! index through a fixed 64-bit finalizer (splitmix64). Parallel and serial
//! generation therefore produce identical datasets: the seed of episode `e`
//! never depends on how many episodes were drawn before it.

/// Mix a run seed and an index into an independent 64-bit stream seed.
#[inline]
pub fn mix_seed(run_seed: u64, index: u64) -> u64 {
    let mut z = run_seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
