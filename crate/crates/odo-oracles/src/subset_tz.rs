//! Subset distance oracle over a designated vertex set B, after Thorup-Zwick.
//!
//! Classic k-level construction restricted to B-relevant pairs: sampled
//! levels A_0 = B ⊇ A_1 ⊇ ... ⊇ A_{k-1}, per-element level pivots and
//! bunches. Queries are O(k) with multiplicative stretch 2k-1 on B x B.

use odo_core::{sssp, EdgeSet, Graph, VertexId, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SubsetTzError {
    #[error("vertex {0} is not a member of B")]
    NotAMember(VertexId),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubsetTz<W> {
    k: u32,
    /// Sorted members of B.
    members: Vec<VertexId>,
    /// members[i]'s level pivots: (pivot, distance) per level 0..k, None when
    /// the level has no vertex in the member's component.
    level_pivots: Vec<Vec<Option<(VertexId, W)>>>,
    /// members[i]'s bunch: (target vertex, distance), sorted by target.
    bunches: Vec<Vec<(VertexId, W)>>,
}

impl<W: Weight> SubsetTz<W> {
    pub fn build(g: &Graph<W>, b: &[VertexId], k: u32, seed: u64) -> Self {
        assert!(k >= 1, "k must be at least 1");
        let mut members: Vec<VertexId> = b.to_vec();
        members.sort_unstable();
        members.dedup();
        // sampled level hierarchy A_0 = B, each next level keeps an element
        // with probability |B|^(-1/k)
        let mut levels: Vec<Vec<VertexId>> = vec![members.clone()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = if members.is_empty() || k == 1 {
            0.0
        } else {
            (members.len() as f64).powf(-1.0 / k as f64)
        };
        for _ in 1..k {
            let prev = levels.last().unwrap();
            let next: Vec<VertexId> = prev.iter().copied().filter(|_| rng.gen_bool(p)).collect();
            levels.push(next);
        }
        // one sssp per member of B gives d(v, .) rows to derive pivots/bunches
        let empty = EdgeSet::new();
        let rows: Vec<Vec<W>> = members
            .par_iter()
            .map(|&v| sssp(g, v, &empty).dists())
            .collect();
        let dist = |a_idx: usize, target: VertexId| rows[a_idx][target as usize];

        let mut level_pivots: Vec<Vec<Option<(VertexId, W)>>> = Vec::with_capacity(members.len());
        let mut bunches = Vec::with_capacity(members.len());
        for vi in 0..members.len() {
            let mut pivots: Vec<Option<(VertexId, W)>> = Vec::with_capacity(k as usize);
            for level in levels.iter() {
                let mut best: Option<(VertexId, W)> = None;
                for &w in level {
                    let d = dist(vi, w);
                    if d.is_infinite() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bw, bd)) => d < bd || (d == bd && w < bw),
                    };
                    if better {
                        best = Some((w, d));
                    }
                }
                pivots.push(best);
            }
            // bunch: w in A_i \ A_{i+1} with d(w, v) < d(A_{i+1}, v)
            let mut bunch: Vec<(VertexId, W)> = Vec::new();
            for i in 0..k as usize {
                let next_dist = if i + 1 < k as usize {
                    pivots[i + 1].map(|(_, d)| d)
                } else {
                    None
                };
                let next_level: &[VertexId] = if i + 1 < k as usize {
                    &levels[i + 1]
                } else {
                    &[]
                };
                for &w in &levels[i] {
                    if next_level.binary_search(&w).is_ok() {
                        continue;
                    }
                    let d = dist(vi, w);
                    if d.is_infinite() {
                        continue;
                    }
                    let include = match next_dist {
                        None => true,
                        Some(nd) => d < nd,
                    };
                    if include {
                        bunch.push((w, d));
                    }
                }
            }
            bunch.sort_by_key(|&(w, _)| w);
            bunch.dedup_by_key(|&mut (w, _)| w);
            level_pivots.push(pivots);
            bunches.push(bunch);
        }
        SubsetTz {
            k,
            members,
            level_pivots,
            bunches,
        }
    }

    fn index_of(&self, v: VertexId) -> Result<usize, SubsetTzError> {
        self.members
            .binary_search(&v)
            .map_err(|_| SubsetTzError::NotAMember(v))
    }

    fn bunch_dist(&self, idx: usize, w: VertexId) -> Option<W> {
        self.bunches[idx]
            .binary_search_by_key(&w, |&(t, _)| t)
            .ok()
            .map(|i| self.bunches[idx][i].1)
    }

    /// Estimate of d(p, q) for p, q in B, stretch 2k-1 multiplicative.
    pub fn query(&self, p: VertexId, q: VertexId) -> Result<W, SubsetTzError> {
        let pi = self.index_of(p)?;
        let qi = self.index_of(q)?;
        if p == q {
            return Ok(W::zero());
        }
        let (mut u_idx, mut v_idx) = (pi, qi);
        let mut i = 0usize;
        loop {
            let (w, dw) = match self.level_pivots[u_idx][i] {
                Some(x) => x,
                None => return Ok(W::infinity()),
            };
            if let Some(dv) = self.bunch_dist(v_idx, w) {
                return Ok(dw.add_sat(dv));
            }
            i += 1;
            if i >= self.k as usize {
                // A_{k-1} is contained in every bunch of the same component
                return Ok(W::infinity());
            }
            std::mem::swap(&mut u_idx, &mut v_idx);
        }
    }

    pub fn members(&self) -> &[VertexId] {
        &self.members
    }

    pub fn space_words(&self) -> u64 {
        let bunch_words: u64 = self.bunches.iter().map(|b| 2 * b.len() as u64).sum();
        let pivot_words: u64 = self.level_pivots.iter().map(|p| 2 * p.len() as u64).sum();
        bunch_words + pivot_words + self.members.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::erdos_renyi;

    #[test]
    fn k1_is_exact_table() {
        let g = erdos_renyi(30, 0.15, 1, 5, 4);
        let b: Vec<VertexId> = (0..15).collect();
        let tz = SubsetTz::build(&g, &b, 1, 0);
        for &p in &b {
            for &q in &b {
                let exact = sssp(&g, p, &EdgeSet::new()).dist(q);
                assert_eq!(tz.query(p, q).unwrap(), exact);
            }
        }
    }

    #[test]
    fn self_query_is_zero() {
        let g = erdos_renyi(20, 0.2, 1, 3, 6);
        let tz = SubsetTz::build(&g, &[3, 7, 11], 2, 1);
        assert_eq!(tz.query(7, 7).unwrap(), 0);
    }

    #[test]
    fn rejects_non_member() {
        let g = erdos_renyi(10, 0.3, 1, 2, 2);
        let tz = SubsetTz::build(&g, &[1, 2], 2, 0);
        assert!(tz.query(1, 5).is_err());
    }

    #[test]
    fn k2_stretch_three_on_random_graph() {
        let g = erdos_renyi(60, 0.12, 1, 6, 9);
        let b: Vec<VertexId> = (0..30).collect();
        let tz = SubsetTz::build(&g, &b, 2, 5);
        for &p in &b {
            let exact = sssp(&g, p, &EdgeSet::new());
            for &q in &b {
                let d = exact.dist(q);
                let est = tz.query(p, q).unwrap();
                if d == u64::MAX {
                    assert_eq!(est, u64::MAX);
                    continue;
                }
                assert!(est >= d);
                assert!(est <= 3 * d, "({p},{q}): est {est} vs d {d}");
            }
        }
    }
}
