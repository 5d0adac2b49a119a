//! All-pairs canonical shortest paths.
//!
//! One deterministic Dijkstra per source; the parent matrix pins the unique
//! canonical path for every pair, which downstream structures (expaths,
//! FT-tree parts, long-path collection) rely on.

use crate::graph::{EdgeId, EdgeMask, EdgeSet, Graph, Path, VertexId};
use crate::sssp::{sssp, Label, NO_PARENT};
use crate::weight::Weight;

#[derive(Debug, Clone)]
pub struct AllPairs<W> {
    n: usize,
    labels: Vec<Label<W>>,
    parent: Vec<EdgeId>,
}

impl<W: Weight> AllPairs<W> {
    pub fn build(g: &Graph<W>) -> Self {
        let n = g.n();
        let mut labels = vec![Label::unreachable(); n * n];
        let mut parent = vec![NO_PARENT; n * n];
        let empty = EdgeSet::new();
        for src in 0..n as VertexId {
            let r = sssp(g, src, &empty);
            let base = src as usize * n;
            labels[base..base + n].copy_from_slice(&r.labels);
            parent[base..base + n].copy_from_slice(&r.parent);
        }
        AllPairs { n, labels, parent }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> W {
        self.labels[u as usize * self.n + v as usize].dist
    }

    pub fn hops(&self, u: VertexId, v: VertexId) -> u32 {
        self.labels[u as usize * self.n + v as usize].hops
    }

    fn parent_edge(&self, src: VertexId, v: VertexId) -> EdgeId {
        self.parent[src as usize * self.n + v as usize]
    }

    /// The canonical shortest path from `u` to `v`.
    pub fn path(&self, g: &Graph<W>, u: VertexId, v: VertexId) -> Option<Path<W>> {
        if self.dist(u, v).is_infinite() {
            return None;
        }
        let mut vertices = vec![v];
        let mut cur = v;
        while cur != u {
            let eid = self.parent_edge(u, cur);
            cur = g.edge(eid).other(cur);
            vertices.push(cur);
        }
        vertices.reverse();
        Some(Path {
            vertices,
            length: self.dist(u, v),
        })
    }

    /// Walks the canonical path u -> v, calling `visit` on every edge id.
    /// Stops early (returning false) if `visit` returns false.
    pub fn scan_path_edges(&self, g: &Graph<W>, u: VertexId, v: VertexId, mut visit: impl FnMut(EdgeId) -> bool) -> bool {
        let mut cur = v;
        while cur != u {
            let eid = self.parent_edge(u, cur);
            if !visit(eid) {
                return false;
            }
            cur = g.edge(eid).other(cur);
        }
        true
    }

    /// True iff the canonical shortest u-v path exists and avoids every edge
    /// in `removed`.
    pub fn path_avoids(&self, g: &Graph<W>, u: VertexId, v: VertexId, removed: &EdgeMask) -> bool {
        if self.dist(u, v).is_infinite() {
            return false;
        }
        self.scan_path_edges(g, u, v, |eid| !removed.contains(eid))
    }

    pub fn space_words(&self) -> u64 {
        (2 * self.n * self.n) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apsp_matches_structure() {
        let g = Graph::from_edges(4, [(0, 1, 2u64), (1, 2, 2), (2, 3, 2), (0, 3, 7)], true).unwrap();
        let ap = AllPairs::build(&g);
        assert_eq!(ap.dist(0, 3), 6);
        assert_eq!(ap.path(&g, 0, 3).unwrap().vertices, vec![0, 1, 2, 3]);
        assert_eq!(ap.dist(3, 0), 6);
    }

    #[test]
    fn canonical_paths_are_symmetric() {
        let g = crate::gen::erdos_renyi(24, 0.3, 1, 5, 11);
        let ap = AllPairs::build(&g);
        for u in 0..24u32 {
            for v in 0..24u32 {
                if u == v || ap.dist(u, v).is_infinite() {
                    continue;
                }
                let puv = ap.path(&g, u, v).unwrap();
                let mut pvu = ap.path(&g, v, u).unwrap();
                pvu.vertices.reverse();
                assert_eq!(puv.vertices, pvu.vertices, "asymmetric pair ({u},{v})");
            }
        }
    }
}
