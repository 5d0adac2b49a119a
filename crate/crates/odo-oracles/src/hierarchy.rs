//! Hierarchy distance oracle with stretch (2k-1+eps, 4kW).
//!
//! Stores the vicinity lists, each vertex's nearest pivot, and a subset
//! Thorup-Zwick oracle over the pivot set B; no per-vertex full distance
//! rows. The cost from a query endpoint to a pivot is bounded by the
//! hop-budgeted H-search value plus the visited vertex's pivot distance,
//! which is exactly the quantity the stretch argument uses.
//!
//! Path reporting is optional: it needs per-pivot shortest-path trees, which
//! cost the O(|B| n) words this oracle otherwise avoids. It is enabled only
//! when the oracle serves as the inner path-reporting oracle of the
//! fault-tolerance transformation.

use crate::hsearch::HopSearch;
use crate::near_additive::DoWorkspace;
use crate::pivots::{PivotAssignment, PivotMode, PivotRow};
use crate::subset_tz::SubsetTz;
use crate::vicinity::VicinityIndex;
use num_rational::Ratio;
use odo_core::{ratio_ceil, Graph, Path, VertexId, Weight};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HierarchyDo<W> {
    graph: Graph<W>,
    vic: VicinityIndex<W>,
    /// Per vertex: nearest pivot and its distance.
    nearest: Vec<Option<(VertexId, W)>>,
    tz: SubsetTz<W>,
    k: u32,
    eps: Ratio<u64>,
    hop_budget: u32,
    /// Per-pivot SPT rows, present only in path-reporting mode.
    path_rows: Option<PivotAssignment<W>>,
}

#[derive(Debug, Clone, Copy)]
enum Witness {
    Trivial,
    None,
    /// The target was reached by the s-side search.
    Reached,
    Pivots {
        pu: VertexId,
        u: VertexId,
        pv: VertexId,
        v: VertexId,
    },
}

impl<W: Weight> HierarchyDo<W> {
    #[allow(clippy::too_many_arguments)]
    pub fn build(
        g: &Graph<W>,
        k_closest: usize,
        k: u32,
        eps: Ratio<u64>,
        mode: PivotMode,
        tz_seed: u64,
        path_support: bool,
    ) -> Self {
        assert!(k >= 1, "hierarchy parameter k must be at least 1");
        assert!(*eps.numer() > 0, "epsilon must be positive");
        let vic = VicinityIndex::build(g, k_closest.min(g.n().max(1)));
        let assignment = PivotAssignment::build(g, &vic, mode);
        let tz = SubsetTz::build(g, &assignment.pivots, k, tz_seed);
        let nearest = (0..g.n() as VertexId)
            .map(|v| assignment.nearest_pivot(v))
            .collect();
        let hop_budget = ratio_ceil(Ratio::from_integer(4 * k as u64) / eps) as u32;
        HierarchyDo {
            graph: g.clone(),
            vic,
            nearest,
            tz,
            k,
            eps,
            hop_budget,
            path_rows: path_support.then_some(assignment),
        }
    }

    pub fn graph(&self) -> &Graph<W> {
        &self.graph
    }

    pub fn subset_oracle(&self) -> &SubsetTz<W> {
        &self.tz
    }

    pub fn pivot_count(&self) -> usize {
        self.tz.members().len()
    }

    /// Declared stretch (2k-1+eps, 4kW).
    pub fn stretch(&self) -> (Ratio<u64>, W) {
        let alpha = Ratio::from_integer(2 * self.k as u64 - 1) + self.eps;
        let mut beta = W::zero();
        for _ in 0..4 * self.k {
            beta = beta.add_sat(self.graph.max_weight());
        }
        (alpha, beta)
    }

    pub fn workspace(&self) -> DoWorkspace<W> {
        DoWorkspace::new(self.graph.n())
    }

    pub fn query(&self, s: VertexId, t: VertexId) -> W {
        let mut ws = self.workspace();
        self.query_in(&mut ws, s, t)
    }

    pub fn query_in(&self, ws: &mut DoWorkspace<W>, s: VertexId, t: VertexId) -> W {
        self.query_witness(ws, s, t).0
    }

    fn query_witness(&self, ws: &mut DoWorkspace<W>, s: VertexId, t: VertexId) -> (W, Witness) {
        if s == t {
            return (W::zero(), Witness::Trivial);
        }
        if !self.graph.same_component(s, t) {
            return (W::infinity(), Witness::None);
        }
        ws.side_s.run(&self.vic, s, self.hop_budget);
        if ws.side_s.reached(t) {
            return (ws.side_s.dist(t), Witness::Reached);
        }
        ws.side_t.run(&self.vic, t, self.hop_budget);
        // best endpoint-to-pivot cost per distinct pivot on each side
        let collect = |search: &HopSearch<W>| {
            let mut cands: Vec<(VertexId, W, VertexId)> = Vec::new();
            for &u in search.seen() {
                if let Some((p, dp)) = self.nearest[u as usize] {
                    let cost = search.dist(u).add_sat(dp);
                    match cands.iter_mut().find(|c| c.0 == p) {
                        Some(c) => {
                            if cost < c.1 {
                                c.1 = cost;
                                c.2 = u;
                            }
                        }
                        None => cands.push((p, cost, u)),
                    }
                }
            }
            cands
        };
        let side_s = collect(&ws.side_s);
        let side_t = collect(&ws.side_t);
        let mut best = W::infinity();
        let mut witness = Witness::None;
        for &(pu, cu, u) in &side_s {
            for &(pv, cv, v) in &side_t {
                let mid = self.tz.query(pu, pv).expect("pivots are members of B");
                let cand = cu.add_sat(mid).add_sat(cv);
                if cand < best {
                    best = cand;
                    witness = Witness::Pivots { pu, u, pv, v };
                }
            }
        }
        (best, witness)
    }

    /// Estimate plus a realizing walk of length at most the estimate.
    /// Panics unless built with path support.
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
        let rows = self
            .path_rows
            .as_ref()
            .expect("hierarchy oracle built without path support");
        let (est, witness) = self.query_witness(ws, s, t);
        let path = match witness {
            Witness::Trivial => Some(Path::single(s)),
            Witness::None => None,
            Witness::Reached => {
                let vertices = self.expand_hop_chain(ws.side_s.hop_chain(t));
                let length = self
                    .graph
                    .path_length(&vertices)
                    .expect("expanded walk is valid");
                debug_assert!(length == est);
                Some(Path { vertices, length })
            }
            Witness::Pivots { pu, u, pv, v } => {
                // realize s -> u -> pu -> pv -> v -> t; the middle leg is the
                // exact pivot-to-pivot path, so the walk length never exceeds
                // the estimate (which uses the subset-oracle value instead)
                let row_u = rows
                    .rows
                    .iter()
                    .find(|r| r.pivot == pu)
                    .expect("pivot has a row");
                let row_v = rows
                    .rows
                    .iter()
                    .find(|r| r.pivot == pv)
                    .expect("pivot has a row");
                let fetch = |row: &PivotRow<W>, x: VertexId| {
                    row.path_from_pivot(&self.graph, x)
                        .expect("pivot row reaches its component")
                        .vertices
                };
                let mut vertices = self.expand_hop_chain(ws.side_s.hop_chain(u));
                {
                    let mut up = fetch(row_u, u);
                    up.reverse(); // u .. pu
                    vertices.extend(up.iter().skip(1));
                }
                vertices.extend(fetch(row_u, pv).iter().skip(1));
                vertices.extend(fetch(row_v, v).iter().skip(1));
                {
                    let tail = self.expand_hop_chain(ws.side_t.hop_chain(v));
                    vertices.extend(tail.iter().rev().skip(1));
                }
                let length = self
                    .graph
                    .path_length(&vertices)
                    .expect("concatenated walk is valid");
                debug_assert!(length <= est);
                Some(Path { vertices, length })
            }
        };
        (est, path)
    }

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

    pub fn space_words(&self) -> u64 {
        let base = self.vic.space_words() + 2 * self.nearest.len() as u64 + self.tz.space_words();
        base + self.path_rows.as_ref().map_or(0, |r| r.space_words())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::erdos_renyi;
    use odo_core::{sssp, EdgeSet};

    #[test]
    fn self_query_zero() {
        let g = erdos_renyi(20, 0.2, 1, 4, 3);
        let oracle = HierarchyDo::build(&g, 4, 2, Ratio::new(1, 1), PivotMode::Greedy, 0, false);
        assert_eq!(oracle.query(5, 5), 0);
    }

    #[test]
    fn k2_stretch_window_holds() {
        let g = erdos_renyi(80, 0.08, 1, 8, 11);
        let oracle = HierarchyDo::build(&g, 4, 2, Ratio::new(1, 1), PivotMode::Greedy, 0, false);
        let (alpha, beta) = oracle.stretch();
        let mut ws = oracle.workspace();
        for s in 0..g.n() as u32 {
            let exact = sssp(&g, s, &EdgeSet::new());
            for t in 0..g.n() as u32 {
                let d = exact.dist(t);
                let est = oracle.query_in(&mut ws, s, t);
                if d == u64::MAX {
                    assert_eq!(est, u64::MAX);
                    continue;
                }
                assert!(est >= d, "underestimate at ({s},{t})");
                assert!(
                    u64::within_stretch(est, alpha, d, beta),
                    "({s},{t}): est {est} d {d}"
                );
            }
        }
    }

    #[test]
    fn path_mode_reports_valid_walks() {
        let g = erdos_renyi(40, 0.12, 1, 1, 19);
        let oracle = HierarchyDo::build(&g, 4, 1, Ratio::new(1, 1), PivotMode::Greedy, 0, true);
        for s in 0..g.n() as u32 {
            for t in 0..g.n() as u32 {
                let (est, path) = oracle.query_path(s, t);
                if est == u64::MAX {
                    continue;
                }
                let p = path.expect("finite estimate reports a path");
                assert_eq!(p.source(), s);
                assert_eq!(p.target(), t);
                assert_eq!(g.path_length(&p.vertices), Some(p.length));
                assert!(p.length <= est);
            }
        }
    }
}
