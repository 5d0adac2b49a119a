//! Lowest common ancestors over rooted shortest-path trees.
//!
//! Euler tour + sparse-table RMQ: linearithmic build, constant-time queries.
//! The payoff operation is `edge_on_path`, which decides whether a tree edge
//! lies on the unique tree path between two vertices.

use crate::graph::{EdgeId, Graph, VertexId};
use crate::sssp::NO_PARENT;
use crate::weight::Weight;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LcaIndex {
    root: VertexId,
    parent: Vec<EdgeId>,
    parent_vertex: Vec<VertexId>,
    depth: Vec<u32>,
    /// First occurrence of each vertex in the Euler tour (usize::MAX if the
    /// vertex is not in the tree).
    first_occ: Vec<usize>,
    /// Euler tour of vertices.
    tour: Vec<VertexId>,
    /// sparse[k][i] = index of the min-depth vertex in tour[i .. i + 2^k].
    sparse: Vec<Vec<u32>>,
}

impl LcaIndex {
    /// Builds the index from a parent-edge array (as produced by `sssp`)
    /// rooted at `root`. Vertices with `NO_PARENT` other than the root are
    /// treated as outside the tree.
    pub fn build<W: Weight>(g: &Graph<W>, parent: &[EdgeId], root: VertexId) -> Self {
        let n = g.n();
        let mut parent_vertex = vec![VertexId::MAX; n];
        let mut children: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for v in 0..n as VertexId {
            if v == root || parent[v as usize] == NO_PARENT {
                continue;
            }
            let p = g.edge(parent[v as usize]).other(v);
            parent_vertex[v as usize] = p;
            children[p as usize].push(v);
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut depth = vec![0u32; n];
        let mut first_occ = vec![usize::MAX; n];
        let mut tour = Vec::with_capacity(2 * n);
        // iterative Euler tour
        let mut stack: Vec<(VertexId, usize)> = vec![(root, 0)];
        first_occ[root as usize] = 0;
        tour.push(root);
        while let Some(&mut (v, ref mut ci)) = stack.last_mut() {
            if *ci < children[v as usize].len() {
                let c = children[v as usize][*ci];
                *ci += 1;
                depth[c as usize] = depth[v as usize] + 1;
                first_occ[c as usize] = tour.len();
                tour.push(c);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    tour.push(p);
                }
            }
        }
        let levels = usize::BITS - tour.len().leading_zeros();
        let mut sparse: Vec<Vec<u32>> = Vec::with_capacity(levels as usize);
        sparse.push((0..tour.len() as u32).collect());
        let mut k = 1usize;
        while (1 << k) <= tour.len() {
            let half = 1 << (k - 1);
            let prev = &sparse[k - 1];
            let mut cur = Vec::with_capacity(tour.len() - (1 << k) + 1);
            for i in 0..=tour.len() - (1 << k) {
                let a = prev[i];
                let b = prev[i + half];
                cur.push(
                    if depth[tour[a as usize] as usize] <= depth[tour[b as usize] as usize] {
                        a
                    } else {
                        b
                    },
                );
            }
            sparse.push(cur);
            k += 1;
        }
        LcaIndex {
            root,
            parent: parent.to_vec(),
            parent_vertex,
            depth,
            first_occ,
            tour,
            sparse,
        }
    }

    pub fn in_tree(&self, v: VertexId) -> bool {
        self.first_occ[v as usize] != usize::MAX
    }

    pub fn lca(&self, a: VertexId, b: VertexId) -> Option<VertexId> {
        if !self.in_tree(a) || !self.in_tree(b) {
            return None;
        }
        let (mut i, mut j) = (self.first_occ[a as usize], self.first_occ[b as usize]);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let k = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize;
        let x = self.sparse[k][i];
        let y = self.sparse[k][j + 1 - (1 << k)];
        let vx = self.tour[x as usize];
        let vy = self.tour[y as usize];
        Some(if self.depth[vx as usize] <= self.depth[vy as usize] {
            vx
        } else {
            vy
        })
    }

    /// True iff `a` is an ancestor of `b` (inclusive).
    pub fn is_ancestor(&self, a: VertexId, b: VertexId) -> bool {
        self.lca(a, b) == Some(a)
    }

    pub fn depth_of(&self, v: VertexId) -> u32 {
        self.depth[v as usize]
    }

    /// Decides whether the edge `e` lies on the tree path from `x` to `y`.
    /// Non-tree edges never lie on a tree path.
    pub fn edge_on_path<W: Weight>(
        &self,
        g: &Graph<W>,
        x: VertexId,
        y: VertexId,
        e: EdgeId,
    ) -> bool {
        let edge = g.edge(e);
        // identify the child endpoint if e is a tree edge
        let child = if self.parent[edge.u as usize] == e {
            edge.u
        } else if self.parent[edge.v as usize] == e {
            edge.v
        } else {
            return false;
        };
        if !self.in_tree(x) || !self.in_tree(y) {
            return false;
        }
        let l = match self.lca(x, y) {
            Some(l) => l,
            None => return false,
        };
        // (child, parent(child)) is on x..y iff child sits strictly below the
        // lca on one of the two branches
        child != l
            && self.is_ancestor(l, child)
            && (self.is_ancestor(child, x) || self.is_ancestor(child, y))
    }

    pub fn space_words(&self) -> u64 {
        (self.parent.len()
            + self.parent_vertex.len()
            + self.depth.len()
            + self.first_occ.len()
            + self.tour.len()
            + self.sparse.iter().map(|s| s.len()).sum::<usize>()) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSet;
    use crate::sssp::sssp;

    fn path_graph(n: usize) -> Graph<u64> {
        Graph::from_edges(n, (0..n as u32 - 1).map(|i| (i, i + 1, 1u64)), false).unwrap()
    }

    #[test]
    fn path_tree_edge_membership() {
        let g = path_graph(3);
        let r = sssp(&g, 0, &EdgeSet::new());
        let idx = LcaIndex::build(&g, &r.parent, 0);
        let e12 = g.edge_id(1, 2).unwrap();
        assert!(idx.edge_on_path(&g, 0, 2, e12));
    }

    #[test]
    fn non_tree_edge_is_false() {
        let g = Graph::from_edges(3, [(0, 1, 1u64), (1, 2, 1), (0, 2, 5)], true).unwrap();
        let r = sssp(&g, 0, &EdgeSet::new());
        // SPT from 0 is the path 0-1-2; (0,2) is not a tree edge
        let idx = LcaIndex::build(&g, &r.parent, 0);
        let e02 = g.edge_id(0, 2).unwrap();
        assert!(!idx.edge_on_path(&g, 0, 2, e02));
    }

    #[test]
    fn star_lca_is_center() {
        let g = Graph::from_edges(4, [(0, 1, 1u64), (0, 2, 1), (0, 3, 1)], false).unwrap();
        let r = sssp(&g, 0, &EdgeSet::new());
        let idx = LcaIndex::build(&g, &r.parent, 0);
        assert_eq!(idx.lca(1, 2), Some(0));
        assert_eq!(idx.lca(3, 3), Some(3));
    }
}
