//! Per-vertex truncated shortest-path trees over the K closest vertices.

use odo_core::sssp::sssp_truncated;
use odo_core::{EdgeId, EdgeSet, Graph, Path, VertexId, Weight};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VicEntry<W> {
    pub vertex: VertexId,
    pub dist: W,
    /// Parent edge inside the truncated tree (`u32::MAX` at the root).
    pub parent_edge: EdgeId,
}

/// For every vertex v, the list K[v] of its K closest vertices (v included),
/// stored as a truncated shortest-path tree. Entries are sorted by
/// (distance, vertex id); truncation follows the canonical settle order, so
/// every entry's tree parent is also in the list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VicinityIndex<W> {
    k: usize,
    lists: Vec<Vec<VicEntry<W>>>,
}

impl<W: Weight> VicinityIndex<W> {
    pub fn build(g: &Graph<W>, k: usize) -> Self {
        assert!(k >= 1 && k <= g.n().max(1), "K must be in 1..=n");
        let empty = EdgeSet::new();
        let lists: Vec<Vec<VicEntry<W>>> = (0..g.n() as VertexId)
            .into_par_iter()
            .map(|v| {
                let (r, order) = sssp_truncated(g, v, &empty, k);
                let mut entries: Vec<VicEntry<W>> = order
                    .into_iter()
                    .map(|u| VicEntry {
                        vertex: u,
                        dist: r.labels[u as usize].dist,
                        parent_edge: r.parent[u as usize],
                    })
                    .collect();
                entries.sort_by(|a, b| {
                    a.dist
                        .partial_cmp(&b.dist)
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(a.vertex.cmp(&b.vertex))
                });
                entries
            })
            .collect();
        VicinityIndex { k, lists }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn list(&self, v: VertexId) -> &[VicEntry<W>] {
        &self.lists[v as usize]
    }

    /// True iff K[v] holds exactly K entries (the component is not smaller).
    pub fn is_full(&self, v: VertexId) -> bool {
        self.lists[v as usize].len() == self.k
    }

    pub fn member_vertices(&self, v: VertexId) -> Vec<VertexId> {
        self.lists[v as usize].iter().map(|e| e.vertex).collect()
    }

    /// Tree path from `root` to a member `target` of K[root], expanded to
    /// graph vertices.
    pub fn tree_path(&self, g: &Graph<W>, root: VertexId, target: VertexId) -> Option<Path<W>> {
        let list = &self.lists[root as usize];
        let find = |v: VertexId| list.iter().find(|e| e.vertex == v);
        let mut entry = find(target)?;
        let mut vertices = vec![target];
        while entry.vertex != root {
            let prev = g.edge(entry.parent_edge).other(entry.vertex);
            vertices.push(prev);
            entry = find(prev).expect("truncated tree is ancestor-closed");
        }
        vertices.reverse();
        let length = find(target).unwrap().dist;
        Some(Path { vertices, length })
    }

    pub fn space_words(&self) -> u64 {
        self.lists.iter().map(|l| 3 * l.len() as u64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::erdos_renyi;
    use odo_core::sssp::sssp_truncated;

    #[test]
    fn path_graph_k2() {
        let g: Graph<u64> =
            Graph::from_edges(4, (0..3u32).map(|i| (i, i + 1, 1u64)), false).unwrap();
        let vic = VicinityIndex::build(&g, 2);
        assert_eq!(vic.member_vertices(0), vec![0, 1]);
    }

    #[test]
    fn k_equals_n_covers_component() {
        let g = erdos_renyi(20, 0.4, 1, 3, 5);
        let vic = VicinityIndex::build(&g, g.n());
        for v in 0..g.n() as u32 {
            assert_eq!(vic.list(v).len(), g.component_size(v));
        }
    }

    #[test]
    fn lists_match_full_dijkstra_prefix() {
        let g = erdos_renyi(40, 0.15, 1, 9, 12);
        let k = 6;
        let vic = VicinityIndex::build(&g, k);
        for v in 0..g.n() as u32 {
            let (r, order) = sssp_truncated(&g, v, &EdgeSet::new(), usize::MAX);
            let take = order.len().min(k);
            let mut expected: Vec<(u64, VertexId)> = order[..take]
                .iter()
                .map(|&u| (r.dist(u), u))
                .collect();
            expected.sort_unstable();
            let got: Vec<(u64, VertexId)> =
                vic.list(v).iter().map(|e| (e.dist, e.vertex)).collect();
            assert_eq!(got, expected, "vertex {v}");
        }
    }

    #[test]
    fn tree_paths_have_stored_length() {
        let g = erdos_renyi(30, 0.2, 1, 7, 99);
        let vic = VicinityIndex::build(&g, 5);
        for v in 0..g.n() as u32 {
            for e in vic.list(v) {
                let p = vic.tree_path(&g, v, e.vertex).unwrap();
                assert_eq!(g.path_length(&p.vertices), Some(e.dist));
            }
        }
    }
}
