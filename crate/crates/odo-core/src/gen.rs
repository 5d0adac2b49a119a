//! Seeded random graph generation for tests and benchmarks.

use crate::graph::{Graph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi G(n, p) with integer weights drawn uniformly from
/// `[w_min, w_max]`. With `w_min == w_max == 1` the graph is unweighted.
pub fn erdos_renyi(n: usize, p: f64, w_min: u64, w_max: u64, seed: u64) -> Graph<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(p) {
                let w = if w_min == w_max {
                    w_min
                } else {
                    rng.gen_range(w_min..=w_max)
                };
                edges.push((u, v, w));
            }
        }
    }
    let is_weighted = w_min != 1 || w_max != 1;
    Graph::from_edges(n, edges, is_weighted).expect("generated edges are valid")
}

/// Connected variant: an ER graph plus a random spanning chain so every
/// vertex is reachable.
pub fn connected_erdos_renyi(n: usize, p: f64, w_min: u64, w_max: u64, seed: u64) -> Graph<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut edges: Vec<(VertexId, VertexId, u64)> = order
        .windows(2)
        .map(|w| {
            let wt = if w_min == w_max {
                w_min
            } else {
                rng.gen_range(w_min..=w_max)
            };
            (w[0], w[1], wt)
        })
        .collect();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(p) {
                let w = if w_min == w_max {
                    w_min
                } else {
                    rng.gen_range(w_min..=w_max)
                };
                edges.push((u, v, w));
            }
        }
    }
    let is_weighted = w_min != 1 || w_max != 1;
    Graph::from_edges(n, edges, is_weighted).expect("generated edges are valid")
}

/// All graphs on `n` vertices, enumerated by edge-subset bitmask.
/// Only sensible for very small `n`.
pub fn all_graphs_unweighted(n: usize) -> impl Iterator<Item = Graph<u64>> {
    let pairs: Vec<(VertexId, VertexId)> = (0..n as VertexId)
        .flat_map(|u| (u + 1..n as VertexId).map(move |v| (u, v)))
        .collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &(u, v))| (u, v, 1u64));
        Graph::from_edges(n, edges, false).unwrap()
    })
}
