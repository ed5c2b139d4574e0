//! Reproducible random instances.
//!
//! The generator is SplitMix64, spelled out here so that any language can
//! replay a profile from its seed:
//!
//! ```text
//! state  = state + 0x9E3779B97F4A7C15            (wrapping)
//! z      = state
//! z      = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  (wrapping)
//! z      = (z ^ (z >> 27)) * 0x94D049BB133111EB  (wrapping)
//! output = z ^ (z >> 31)
//! ```
//!
//! `below(b)` is `output % b`. A uniform permutation of `1..=n` starts from the
//! identity and, for `i = n-1` down to `1`, swaps positions `i` and
//! `below(i + 1)` (0-based).

use crate::model::{PrecedenceGraph, PreferenceProfile, Schedule};

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// A value in `0..bound`. The modulo bias is negligible for the small
    /// bounds used here and keeps the scheme trivial to port.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        self.next_u64() % bound
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }
}

/// Seed of the `trial`-th instance in an experiment seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    SplitMix64::new(seed ^ trial.wrapping_mul(0xD1B5_4A32_D192_ED03)).next_u64()
}

pub fn uniform_permutation(n: usize, rng: &mut SplitMix64) -> Schedule {
    let mut ids: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        let j = rng.index(i + 1);
        ids.swap(i, j);
    }
    Schedule::new(ids).expect("shuffle of 1..=n")
}

/// `v` independent uniform permutations, each with multiplicity 1.
///
/// # Panics
/// If `n` or `v` is zero.
pub fn uniform_profile(n: usize, v: usize, seed: u64) -> PreferenceProfile {
    assert!(n > 0 && v > 0, "need at least one task and one voter");
    let mut rng = SplitMix64::new(seed);
    let prefs: Vec<(Schedule, u64)> = (0..v)
        .map(|_| (uniform_permutation(n, &mut rng), 1))
        .collect();
    PreferenceProfile::from_orders(prefs).expect("non-empty profile")
}

/// Noisy copies of one reference ranking.
///
/// The reference is the first uniform permutation drawn from `seed`; each
/// voter then applies `swaps` adjacent transpositions at positions
/// `below(n - 1)`. With zero swaps every voter equals the reference.
pub fn swap_noise_profile(n: usize, v: usize, swaps: usize, seed: u64) -> PreferenceProfile {
    assert!(n > 0 && v > 0, "need at least one task and one voter");
    let mut rng = SplitMix64::new(seed);
    let reference = uniform_permutation(n, &mut rng);
    let prefs: Vec<(Schedule, u64)> = (0..v)
        .map(|_| {
            let mut s = reference.clone();
            if n > 1 {
                for _ in 0..swaps {
                    let pos = rng.index(n - 1) + 1;
                    s.swap_slots(pos, pos + 1);
                }
            }
            (s, 1)
        })
        .collect();
    PreferenceProfile::from_orders(prefs).expect("non-empty profile")
}

/// A random DAG on `n` tasks: orient each pair along a hidden uniform order
/// and keep it with probability `percent / 100`.
pub fn random_dag(n: usize, percent: u64, rng: &mut SplitMix64) -> PrecedenceGraph {
    let hidden = uniform_permutation(n, rng);
    let order = hidden.ids();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.below(100) < percent {
                edges.push((order[i], order[j]));
            }
        }
    }
    PrecedenceGraph::new(n, edges).expect("edges follow a topological order")
}
