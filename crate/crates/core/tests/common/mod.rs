//! Helpers shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempomotif_core::{LoaderOptions, TemporalGraph, TemporalMotif, Timestamp};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random multigraph: `m` edges over `n` vertices with times in `0..=t_max`.
/// Small `t_max` relative to `m` produces plenty of equal timestamps, so the
/// sequence tie-break gets exercised.
pub fn random_graph(rng: &mut ChaCha8Rng, n: u64, m: usize, t_max: Timestamp) -> TemporalGraph {
    let triples: Vec<(u64, u64, u64)> = (0..m)
        .map(|_| {
            let u = rng.random_range(0..n);
            let mut v = rng.random_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v, rng.random_range(0..=t_max))
        })
        .collect();
    TemporalGraph::from_triples(triples, &LoaderOptions::new()).unwrap()
}

/// A spread of motif shapes: single edge, chains, a back-and-forth pair,
/// a star, a triangle, and a 4-edge cycle.
pub fn motif_zoo() -> Vec<(&'static str, TemporalMotif)> {
    [
        ("single", "2 1\n0 1\n"),
        ("chain2", "3 2\n0 1\n1 2\n"),
        ("pingpong", "2 3\n0 1\n1 0\n0 1\n"),
        ("star33", "3 3\n0 1\n0 2\n0 1\n"),
        ("triangle", "3 3\n0 1\n1 2\n2 0\n"),
        ("cycle4", "4 4\n0 1\n1 2\n2 3\n3 0\n"),
    ]
    .into_iter()
    .map(|(name, spec)| (name, TemporalMotif::parse(spec).unwrap()))
    .collect()
}

/// Three window widths: tight, moderate, and effectively unbounded.
pub fn deltas(t_max: Timestamp) -> [u64; 3] {
    [t_max / 8 + 1, t_max / 2 + 1, u64::MAX / 4]
}
