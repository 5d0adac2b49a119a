//! Greedy hitting-set selection and its vertex-set collectors.
//!
//! The selection loop is sequential by contract: its output must be
//! order-deterministic regardless of thread count. Ties in coverage count
//! are broken by minimum vertex id.

use crate::apsp::AllPairs;
use crate::graph::{Graph, VertexId};
use crate::weight::Weight;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SetSystemError {
    #[error("set {index} has {size} elements, below the minimum M = {min}")]
    SetTooSmall {
        index: usize,
        size: usize,
        min: usize,
    },
    #[error("empty set at index {0}")]
    EmptySet(usize),
}

/// A family of vertex sets, each of size at least `M`.
#[derive(Debug, Clone)]
pub struct SetSystem {
    n: usize,
    min_size: usize,
    sets: Vec<Vec<VertexId>>,
}

impl SetSystem {
    pub fn new(n: usize, min_size: usize) -> Self {
        SetSystem {
            n,
            min_size: min_size.max(1),
            sets: Vec::new(),
        }
    }

    pub fn insert(&mut self, mut set: Vec<VertexId>) -> Result<(), SetSystemError> {
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(SetSystemError::EmptySet(self.sets.len()));
        }
        if set.len() < self.min_size {
            return Err(SetSystemError::SetTooSmall {
                index: self.sets.len(),
                size: set.len(),
                min: self.min_size,
            });
        }
        self.sets.push(set);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn min_size(&self) -> usize {
        self.min_size
    }

    pub fn sets(&self) -> &[Vec<VertexId>] {
        &self.sets
    }

    /// Upper bound `ceil(n * (1 + ln q) / M)` on the greedy output size.
    pub fn greedy_bound(&self) -> usize {
        if self.sets.is_empty() {
            return 0;
        }
        let q = self.sets.len() as f64;
        ((self.n as f64) * (1.0 + q.ln()) / self.min_size as f64).ceil() as usize
    }
}

/// Greedy hitting set: repeatedly pick the vertex contained in the most
/// yet-unhit sets (minimum id on ties) until every set is hit.
pub fn greedy_hitting_set(sys: &SetSystem) -> Vec<VertexId> {
    let mut membership: Vec<Vec<u32>> = vec![Vec::new(); sys.n];
    for (k, set) in sys.sets.iter().enumerate() {
        for &v in set {
            membership[v as usize].push(k as u32);
        }
    }
    let mut count: Vec<u32> = membership.iter().map(|m| m.len() as u32).collect();
    // ordered by (max count, min vertex): encode as (count, Reverse(id))
    let mut queue: BTreeSet<(u32, std::cmp::Reverse<VertexId>)> = (0..sys.n as VertexId)
        .filter(|&v| count[v as usize] > 0)
        .map(|v| (count[v as usize], std::cmp::Reverse(v)))
        .collect();
    let mut hit = vec![false; sys.sets.len()];
    let mut remaining = sys.sets.len();
    let mut out = Vec::new();
    while remaining > 0 {
        let &(c, std::cmp::Reverse(v)) = queue.iter().next_back().expect("unhit sets remain");
        queue.remove(&(c, std::cmp::Reverse(v)));
        debug_assert_eq!(c, count[v as usize]);
        debug_assert!(c > 0);
        out.push(v);
        for &k in &membership[v as usize] {
            if hit[k as usize] {
                continue;
            }
            hit[k as usize] = true;
            remaining -= 1;
            for &u in &sys.sets[k as usize] {
                if u == v {
                    continue;
                }
                let old = count[u as usize];
                if queue.remove(&(old, std::cmp::Reverse(u))) {
                    count[u as usize] = old - 1;
                    if old > 1 {
                        queue.insert((old - 1, std::cmp::Reverse(u)));
                    }
                }
            }
        }
        count[v as usize] = 0;
    }
    out.sort_unstable();
    out
}

/// Collects one vertex set per unordered pair whose canonical shortest path
/// has at least `threshold_edges` edges.
pub fn collect_long_paths<W: Weight>(
    g: &Graph<W>,
    ap: &AllPairs<W>,
    threshold_edges: u32,
) -> SetSystem {
    let mut sys = SetSystem::new(g.n(), threshold_edges.max(1) as usize);
    for u in 0..g.n() as VertexId {
        for v in u + 1..g.n() as VertexId {
            if ap.dist(u, v).is_infinite() || ap.hops(u, v) < threshold_edges {
                continue;
            }
            let path = ap.path(g, u, v).expect("finite distance has a path");
            sys.insert(path.vertices).expect("path has > threshold vertices");
        }
    }
    sys
}

/// One derandomization phase for the first-type pivots: feeds the qualifying
/// balls (stopped at the vertex cap, or with an oversized second-type-pivot
/// intersection) into the greedy selection with M = ceil(f * L^f / lambda).
pub struct BallRecord {
    pub members: Vec<VertexId>,
    pub truncated: bool,
    pub b2_intersection: usize,
}

pub fn derand_b1_phase(
    n: usize,
    balls: &[BallRecord],
    f: u32,
    cap_lf: usize,
    lambda: u32,
) -> Vec<VertexId> {
    let lambda = lambda.max(1) as u128;
    // exact test: |ball ∩ B2| > f * L^f / lambda
    let b2_heavy =
        |count: usize| (count as u128) * lambda > (f as u128) * (cap_lf as u128);
    let m1 = ((f as u128 * cap_lf as u128).div_ceil(lambda) as usize)
        .min(cap_lf)
        .max(1);
    let mut sys = SetSystem::new(n, m1);
    for ball in balls {
        if ball.truncated || b2_heavy(ball.b2_intersection) {
            sys.insert(ball.members.clone())
                .expect("qualifying ball meets the minimum size");
        }
    }
    if sys.is_empty() {
        return Vec::new();
    }
    greedy_hitting_set(&sys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_set_min_id() {
        let mut sys = SetSystem::new(10, 1);
        sys.insert(vec![7, 3]).unwrap();
        assert_eq!(greedy_hitting_set(&sys), vec![3]);
    }

    #[test]
    fn disjoint_sets_force_one_each() {
        let mut sys = SetSystem::new(9, 3);
        sys.insert(vec![0, 1, 2]).unwrap();
        sys.insert(vec![3, 4, 5]).unwrap();
        sys.insert(vec![6, 7, 8]).unwrap();
        let b = greedy_hitting_set(&sys);
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn rejects_undersized_set() {
        let mut sys = SetSystem::new(10, 5);
        assert!(sys.insert(vec![1, 2]).is_err());
        assert!(sys.insert(vec![]).is_err());
    }

    #[test]
    fn coverage_and_cardinality_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let n = 200;
        let m = 10;
        let mut sys = SetSystem::new(n, m);
        for _ in 0..500 {
            let mut set: Vec<VertexId> = (0..n as VertexId).collect();
            for i in (1..set.len()).rev() {
                let j = rng.gen_range(0..=i);
                set.swap(i, j);
            }
            set.truncate(m + rng.gen_range(0..10));
            sys.insert(set).unwrap();
        }
        let b = greedy_hitting_set(&sys);
        for set in sys.sets() {
            assert!(set.iter().any(|v| b.binary_search(v).is_ok()));
        }
        assert!(b.len() <= sys.greedy_bound());
    }

    #[test]
    fn long_paths_on_path_graph() {
        let g: Graph<u64> =
            Graph::from_edges(6, (0..5u32).map(|i| (i, i + 1, 1u64)), false).unwrap();
        let ap = AllPairs::build(&g);
        let sys = collect_long_paths(&g, &ap, 5);
        assert_eq!(sys.len(), 1);
        let sys_none = collect_long_paths(&g, &ap, 6);
        assert!(sys_none.is_empty());
    }
}
