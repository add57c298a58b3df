//! Deterministic derivation of per-task RNG seeds from a master seed.
//!
//! Replicated experiments (graph ensembles, epidemic ensembles, sampled
//! BFS sources) each consume an independent stream seed so they can run in
//! parallel and still reproduce bit-identically. The split is the SplitMix64
//! output function applied to `master + (stream + 1) * GOLDEN_GAMMA`, the
//! same finalizer used by SplitMix64 itself, so nearby stream indices give
//! uncorrelated seeds.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derives the seed for logical stream `stream` from `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(GOLDEN_GAMMA.wrapping_mul(stream.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
