//! Shared test fixtures: definitional brute-force oracles (kept
//! independent of the library's clique-scan implementations) and seeded
//! random instances.
#![allow(dead_code)] // each test target uses its own slice of the fixtures

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stone_core::cover::Cover;
use stone_core::ext::Extended;
use stone_core::space::SpaceSpec;
use stone_core::FiniteMetricSpace;

/// Definitional Lebesgue number: enumerate every subset, find the
/// smallest diameter of one contained in no member.
pub fn brute_lebesgue(space: &FiniteMetricSpace, members: &[Vec<usize>]) -> Extended {
    let n = space.len();
    assert!(n <= 16, "brute force oracle limited to 16 points");
    let masks: Vec<u32> = members
        .iter()
        .map(|m| m.iter().fold(0u32, |acc, &i| acc | 1 << i))
        .collect();
    let mut worst: Option<f64> = None;
    for subset in 1u32..(1 << n) {
        if masks.iter().any(|m| subset & !m == 0) {
            continue;
        }
        let indices: Vec<usize> = (0..n).filter(|&i| subset >> i & 1 == 1).collect();
        let d = space.subset_diameter(&indices);
        worst = Some(worst.map_or(d, |w: f64| w.min(d)));
    }
    worst.map_or(Extended::Infinity, Extended::Finite)
}

pub fn random_integer_space(n: usize, max: u32, seed: u64) -> Arc<FiniteMetricSpace> {
    Arc::new(FiniteMetricSpace::generate(&SpaceSpec::RandomInteger { n, max }, seed).unwrap())
}

/// A random cover: a handful of random subsets patched up with singletons
/// for any point left uncovered.
pub fn random_cover(space: &Arc<FiniteMetricSpace>, seed: u64) -> Cover {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.len();
    let member_count = rng.gen_range(1..=n.max(2));
    let mut members = Vec::new();
    for _ in 0..member_count {
        let member: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        if !member.is_empty() {
            members.push(member);
        }
    }
    let mut covered = vec![false; n];
    for m in &members {
        for &i in m {
            covered[i] = true;
        }
    }
    for (i, c) in covered.into_iter().enumerate() {
        if !c {
            members.push(vec![i]);
        }
    }
    Cover::new(space.clone(), members, None).unwrap()
}

pub fn shuffled_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    order
}

/// Random tree on `n` vertices with integer edge lengths in `1..=max_len`.
pub fn random_tree_edges(n: usize, max_len: u32, seed: u64) -> Vec<(String, String, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..n)
        .map(|v| {
            let parent = rng.gen_range(0..v);
            let len = rng.gen_range(1..=max_len) as f64;
            (parent.to_string(), v.to_string(), len)
        })
        .collect()
}

/// Uniform dyadic value in steps of 1/64 within [lo, hi].
pub fn dyadic(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let steps = ((hi - lo) * 64.0).round() as i64;
    lo + rng.gen_range(0..=steps) as f64 / 64.0
}
