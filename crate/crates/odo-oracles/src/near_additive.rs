//! Near-additive distance oracle with stretch (1+eps, 2W).
//!
//! Stores the vicinity lists, each vertex's nearest pivot, and full distance
//! rows (with first-edge hints) per pivot. The auxiliary graph H is never
//! materialized: queries run a hop-budgeted search directly over the
//! vicinity trees from both endpoints and combine the meet estimate with the
//! best through-pivot estimate. Queries are stateless; a workspace can be
//! reused across calls to avoid reallocation.

use crate::hsearch::HopSearch;
use crate::pivots::{PivotAssignment, PivotMode};
use crate::vicinity::VicinityIndex;
use num_rational::Ratio;
use odo_core::{ratio_ceil, Graph, Path, VertexId, Weight};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NearAdditiveDo<W> {
    graph: Graph<W>,
    vic: VicinityIndex<W>,
    pivots: PivotAssignment<W>,
    eps: Ratio<u64>,
    hop_budget: u32,
}

/// Which line of the query produced the returned estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NaBranch {
    /// The two searches met: hop-bounded distance through H.
    Meet,
    /// Through the nearest pivot of a visited vertex.
    Pivot,
    Disconnected,
    Trivial,
}

impl std::fmt::Display for NaBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NaBranch::Meet => "meet",
            NaBranch::Pivot => "pivot",
            NaBranch::Disconnected => "disconnected",
            NaBranch::Trivial => "trivial",
        };
        f.write_str(s)
    }
}

/// Reusable two-sided search scratch.
#[derive(Debug, Clone)]
pub struct DoWorkspace<W> {
    pub(crate) side_s: HopSearch<W>,
    pub(crate) side_t: HopSearch<W>,
}

impl<W: Weight> DoWorkspace<W> {
    pub fn new(n: usize) -> Self {
        DoWorkspace {
            side_s: HopSearch::new(n),
            side_t: HopSearch::new(n),
        }
    }
}

impl<W: Weight> NearAdditiveDo<W> {
    pub fn build(g: &Graph<W>, k: usize, eps: Ratio<u64>, mode: PivotMode) -> Self {
        assert!(*eps.numer() > 0, "epsilon must be positive");
        let vic = VicinityIndex::build(g, k.min(g.n().max(1)));
        let pivots = PivotAssignment::build(g, &vic, mode);
        let hop_budget = ratio_ceil(eps.recip()) as u32;
        NearAdditiveDo {
            graph: g.clone(),
            vic,
            pivots,
            eps,
            hop_budget,
        }
    }

    pub fn graph(&self) -> &Graph<W> {
        &self.graph
    }

    pub fn eps(&self) -> Ratio<u64> {
        self.eps
    }

    pub fn k(&self) -> usize {
        self.vic.k()
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.pivots.len()
    }

    /// Declared stretch (alpha, beta) = (1 + eps, 2W).
    pub fn stretch(&self) -> (Ratio<u64>, W) {
        (
            self.eps + Ratio::from_integer(1),
            self.graph.max_weight().add_sat(self.graph.max_weight()),
        )
    }

    pub fn workspace(&self) -> DoWorkspace<W> {
        DoWorkspace::new(self.graph.n())
    }

    pub fn query(&self, s: VertexId, t: VertexId) -> W {
        let mut ws = self.workspace();
        self.query_in(&mut ws, s, t).0
    }

    /// Estimate plus the branch that won. Never underestimates the true
    /// distance.
    pub fn query_in(&self, ws: &mut DoWorkspace<W>, s: VertexId, t: VertexId) -> (W, NaBranch) {
        let (est, branch, _) = self.query_witness(ws, s, t);
        (est, branch)
    }

    fn query_witness(
        &self,
        ws: &mut DoWorkspace<W>,
        s: VertexId,
        t: VertexId,
    ) -> (W, NaBranch, VertexId) {
        if s == t {
            return (W::zero(), NaBranch::Trivial, s);
        }
        if !self.graph.same_component(s, t) {
            return (W::infinity(), NaBranch::Disconnected, VertexId::MAX);
        }
        ws.side_s.run(&self.vic, s, self.hop_budget);
        ws.side_t.run(&self.vic, t, self.hop_budget);
        let mut d1 = W::infinity();
        let mut d1_vertex = VertexId::MAX;
        for &v in ws.side_s.seen() {
            if !ws.side_t.reached(v) {
                continue;
            }
            let cand = ws.side_s.dist(v).add_sat(ws.side_t.dist(v));
            if cand < d1 {
                d1 = cand;
                d1_vertex = v;
            }
        }
        let mut d2 = W::infinity();
        let mut d2_vertex = VertexId::MAX;
        for &v in ws.side_s.seen().iter().chain(ws.side_t.seen()) {
            if let Some((idx, _)) = self.pivots.nearest[v as usize] {
                let row = &self.pivots.rows[idx as usize];
                let cand = row.dist[s as usize].add_sat(row.dist[t as usize]);
                if cand < d2 {
                    d2 = cand;
                    d2_vertex = v;
                }
            }
        }
        if d1 <= d2 {
            let branch = if d1.is_infinite() {
                NaBranch::Disconnected
            } else {
                NaBranch::Meet
            };
            (d1, branch, d1_vertex)
        } else {
            (d2, NaBranch::Pivot, d2_vertex)
        }
    }

    /// Estimate plus a realizing walk in G of exactly that length.
    pub fn query_path(&self, s: VertexId, t: VertexId) -> (W, Option<Path<W>>) {
        let mut ws = self.workspace();
        self.query_path_in(&mut ws, s, t)
    }

    pub fn query_path_in(
        &self,
        ws: &mut DoWorkspace<W>,
        s: VertexId,
        t: VertexId,
    ) -> (W, Option<Path<W>>) {
        let (est, branch, witness) = self.query_witness(ws, s, t);
        let path = match branch {
            NaBranch::Trivial => Some(Path::single(s)),
            NaBranch::Disconnected => None,
            NaBranch::Meet => {
                let mut vertices = self.expand_hop_chain(ws.side_s.hop_chain(witness));
                let back = self.expand_hop_chain(ws.side_t.hop_chain(witness));
                vertices.extend(back.iter().rev().skip(1));
                Some(Path {
                    vertices,
                    length: est,
                })
            }
            NaBranch::Pivot => {
                let (idx, _) = self.pivots.nearest[witness as usize].unwrap();
                let row = &self.pivots.rows[idx as usize];
                let mut vertices = {
                    let mut up = row
                        .path_from_pivot(&self.graph, s)
                        .expect("pivot row reaches s")
                        .vertices;
                    up.reverse();
                    up
                };
                let down = row
                    .path_from_pivot(&self.graph, t)
                    .expect("pivot row reaches t");
                vertices.extend(down.vertices.iter().skip(1));
                Some(Path {
                    vertices,
                    length: est,
                })
            }
        };
        debug_assert!(path
            .as_ref()
            .is_none_or(|p| self.graph.path_length(&p.vertices) == Some(est)));
        (est, path)
    }

    /// Expands an H-hop chain into graph vertices by splicing the vicinity
    /// tree path of every hop.
    fn expand_hop_chain(&self, chain: Vec<VertexId>) -> Vec<VertexId> {
        let mut vertices = vec![chain[0]];
        for pair in chain.windows(2) {
            let expanded = self
                .vic
                .tree_path(&self.graph, pair[0], pair[1])
                .expect("hop endpoints lie in the vicinity tree");
            vertices.extend(expanded.vertices.iter().skip(1));
        }
        vertices
    }

    /// Index words: vicinity trees, pivot rows, nearest-pivot table.
    pub fn space_words(&self) -> u64 {
        self.vic.space_words() + self.pivots.space_words()
    }

    pub fn pivot_row_words(&self) -> u64 {
        self.pivots.row_words()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::erdos_renyi;
    use odo_core::{sssp, EdgeSet};

    fn exact_all(g: &Graph<u64>) -> Vec<Vec<u64>> {
        (0..g.n() as u32)
            .map(|s| sssp(g, s, &EdgeSet::new()).dists())
            .collect()
    }

    #[test]
    fn identical_endpoints() {
        let g = erdos_renyi(10, 0.3, 1, 4, 1);
        let oracle = NearAdditiveDo::build(&g, 3, Ratio::new(1, 1), PivotMode::Greedy);
        assert_eq!(oracle.query(4, 4), 0);
    }

    #[test]
    fn small_path_graph_exact_with_full_k() {
        let g: Graph<u64> =
            Graph::from_edges(4, (0..3u32).map(|i| (i, i + 1, 1u64)), false).unwrap();
        let oracle = NearAdditiveDo::build(&g, 4, Ratio::new(1, 2), PivotMode::Greedy);
        let exact = exact_all(&g);
        for s in 0..4u32 {
            for t in 0..4u32 {
                assert_eq!(oracle.query(s, t), exact[s as usize][t as usize]);
            }
        }
    }

    #[test]
    fn greedy_mode_stretch_window() {
        let g = erdos_renyi(120, 0.08, 1, 10, 7);
        let eps = Ratio::new(1, 1);
        let oracle = NearAdditiveDo::build(&g, 8, eps, PivotMode::Greedy);
        let (alpha, beta) = oracle.stretch();
        let exact = exact_all(&g);
        let mut ws = oracle.workspace();
        for s in 0..g.n() as u32 {
            for t in 0..g.n() as u32 {
                let d = exact[s as usize][t as usize];
                let (est, _) = oracle.query_in(&mut ws, s, t);
                if d == u64::MAX {
                    assert!(est == u64::MAX);
                    continue;
                }
                assert!(est >= d, "underestimate at ({s},{t})");
                assert!(
                    u64::within_stretch(est, alpha, d, beta),
                    "stretch violated at ({s},{t}): est {est}, d {d}"
                );
            }
        }
    }

    #[test]
    fn reported_paths_are_valid_walks() {
        let g = erdos_renyi(60, 0.1, 1, 6, 23);
        let oracle = NearAdditiveDo::build(&g, 6, Ratio::new(1, 1), PivotMode::Greedy);
        let mut ws = oracle.workspace();
        let mut checked = 0;
        for s in 0..g.n() as u32 {
            for t in 0..g.n() as u32 {
                let (est, path) = oracle.query_path_in(&mut ws, s, t);
                if est == u64::MAX {
                    assert!(path.is_none());
                    continue;
                }
                let p = path.expect("finite estimate must report a path");
                assert_eq!(p.source(), s);
                assert_eq!(p.target(), t);
                assert_eq!(g.path_length(&p.vertices), Some(est));
                checked += 1;
            }
        }
        assert!(checked > 500);
    }
}
