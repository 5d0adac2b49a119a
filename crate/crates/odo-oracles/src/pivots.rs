//! Pivot selection and per-pivot distance rows.

use crate::vicinity::VicinityIndex;
use odo_core::derand::{greedy_hitting_set, SetSystem};
use odo_core::{sssp, EdgeId, EdgeSet, Graph, Path, VertexId, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PivotMode {
    /// Independent inclusion with probability min(1, C * ln(n) / K).
    Random { seed: u64, c: f64 },
    /// Greedy hitting set over the full vicinity lists.
    Greedy,
}

/// Per-pivot shortest-path row: exact distances to every vertex plus the
/// parent edge of the canonical path, which doubles as the first-edge hint
/// for path reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PivotRow<W> {
    pub pivot: VertexId,
    pub dist: Vec<W>,
    pub parent: Vec<EdgeId>,
}

impl<W: Weight> PivotRow<W> {
    /// Canonical path from the pivot to `v` (the row is an SPT of the pivot).
    pub fn path_from_pivot(&self, g: &Graph<W>, v: VertexId) -> Option<Path<W>> {
        if self.dist[v as usize].is_infinite() {
            return None;
        }
        let mut vertices = vec![v];
        let mut cur = v;
        while cur != self.pivot {
            let eid = self.parent[cur as usize];
            cur = g.edge(eid).other(cur);
            vertices.push(cur);
        }
        vertices.reverse();
        Some(Path {
            vertices,
            length: self.dist[v as usize],
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PivotAssignment<W> {
    /// The pivot set B, sorted by vertex id.
    pub pivots: Vec<VertexId>,
    /// Per vertex: index into `rows` of the nearest pivot and its distance.
    pub nearest: Vec<Option<(u32, W)>>,
    pub rows: Vec<PivotRow<W>>,
}

impl<W: Weight> PivotAssignment<W> {
    /// Selects pivots and computes their rows: one sssp per pivot.
    pub fn build(g: &Graph<W>, vic: &VicinityIndex<W>, mode: PivotMode) -> Self {
        let k = vic.k();
        let n = g.n();
        let pivots: Vec<VertexId> = match mode {
            PivotMode::Random { seed, c } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let p = (c * (n.max(2) as f64).ln() / k as f64).min(1.0);
                (0..n as VertexId).filter(|_| rng.gen_bool(p)).collect()
            }
            PivotMode::Greedy => {
                let mut sys = SetSystem::new(n, k);
                for v in 0..n as VertexId {
                    if vic.is_full(v) {
                        sys.insert(vic.member_vertices(v)).expect("full list has K members");
                    }
                }
                if sys.is_empty() {
                    Vec::new()
                } else {
                    greedy_hitting_set(&sys)
                }
            }
        };
        Self::with_pivots(g, pivots)
    }

    /// Computes rows and nearest-pivot table for a fixed pivot set.
    pub fn with_pivots(g: &Graph<W>, pivots: Vec<VertexId>) -> Self {
        let empty = EdgeSet::new();
        let rows: Vec<PivotRow<W>> = pivots
            .par_iter()
            .map(|&p| {
                let r = sssp(g, p, &empty);
                PivotRow {
                    pivot: p,
                    dist: r.dists(),
                    parent: r.parent,
                }
            })
            .collect();
        let mut nearest: Vec<Option<(u32, W)>> = vec![None; g.n()];
        for (idx, row) in rows.iter().enumerate() {
            for v in 0..g.n() {
                let d = row.dist[v];
                if d.is_infinite() {
                    continue;
                }
                let better = match nearest[v] {
                    None => true,
                    Some((bi, bd)) => {
                        d < bd || (d == bd && row.pivot < rows[bi as usize].pivot)
                    }
                };
                if better {
                    nearest[v] = Some((idx as u32, d));
                }
            }
        }
        PivotAssignment {
            pivots,
            nearest,
            rows,
        }
    }

    pub fn nearest_pivot(&self, v: VertexId) -> Option<(VertexId, W)> {
        self.nearest[v as usize].map(|(idx, d)| (self.rows[idx as usize].pivot, d))
    }

    pub fn row_of(&self, v: VertexId) -> Option<&PivotRow<W>> {
        self.nearest[v as usize].map(|(idx, _)| &self.rows[idx as usize])
    }

    /// Words held by the pivot rows alone (the dominant index).
    pub fn row_words(&self) -> u64 {
        self.rows.iter().map(|r| 2 * r.dist.len() as u64).sum()
    }

    pub fn space_words(&self) -> u64 {
        self.row_words() + self.pivots.len() as u64 + 2 * self.nearest.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::erdos_renyi;

    #[test]
    fn greedy_on_star_selects_center() {
        let g: Graph<u64> =
            Graph::from_edges(5, (1..5u32).map(|v| (0, v, 1u64)), false).unwrap();
        let vic = VicinityIndex::build(&g, 2);
        let pa = PivotAssignment::build(&g, &vic, PivotMode::Greedy);
        assert_eq!(pa.pivots, vec![0]);
    }

    #[test]
    fn random_mode_is_seeded() {
        let g = erdos_renyi(50, 0.1, 1, 5, 3);
        let vic = VicinityIndex::build(&g, 4);
        let a = PivotAssignment::build(&g, &vic, PivotMode::Random { seed: 9, c: 1.0 });
        let b = PivotAssignment::build(&g, &vic, PivotMode::Random { seed: 9, c: 1.0 });
        assert_eq!(a.pivots, b.pivots);
    }

    #[test]
    fn greedy_hits_every_full_list() {
        let g = erdos_renyi(100, 0.08, 1, 8, 17);
        let vic = VicinityIndex::build(&g, 5);
        let pa = PivotAssignment::build(&g, &vic, PivotMode::Greedy);
        for v in 0..g.n() as u32 {
            if vic.is_full(v) {
                assert!(
                    vic.member_vertices(v)
                        .iter()
                        .any(|u| pa.pivots.binary_search(u).is_ok()),
                    "list of {v} unhit"
                );
            }
        }
    }

    #[test]
    fn nearest_pivot_minimizes_distance() {
        let g = erdos_renyi(60, 0.1, 1, 6, 8);
        let vic = VicinityIndex::build(&g, 4);
        let pa = PivotAssignment::build(&g, &vic, PivotMode::Greedy);
        for v in 0..g.n() as u32 {
            if let Some((_, d)) = pa.nearest_pivot(v) {
                for row in &pa.rows {
                    assert!(d <= row.dist[v as usize]);
                }
            }
        }
    }
}
