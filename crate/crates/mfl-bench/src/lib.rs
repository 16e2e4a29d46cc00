//! Shared fixtures for the kernel benchmarks: deterministic instances
//! and matrices sized to exercise each hot path without drowning the
//! run in setup time.

use mfl_core::cost::Cost;
use mfl_core::generators::{gen_random, RandomConfig, RandomModel};
use mfl_core::instance::Instance;

/// Deterministic pseudo-random k×k cost matrix (no RNG dependency —
/// a splitmix-style hash keeps the fixture reproducible and cheap).
pub fn cost_matrix(k: usize, seed: u64) -> Vec<Vec<Cost>> {
    let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    (0..k).map(|_| (0..k).map(|_| next() % 1_000).collect()).collect()
}

/// A connected Euclidean instance of the requested shape.
pub fn euclidean_instance(n: usize, k: usize, clients: usize, seed: u64) -> Instance {
    gen_random(&RandomConfig {
        n,
        k,
        num_clients: clients,
        model: RandomModel::Euclidean { coord_range: 10_000 },
        weight_range: (1, 3),
        demand_range: (1, 5),
        seed,
    })
    .expect("benchmark fixture parameters are valid")
}
