//! Hop-radius balls via capped breadth-first search.

use crate::graph::{EdgeId, EdgeSet, Graph, Path, VertexId};
use crate::sssp::NO_PARENT;
use crate::weight::Weight;
use std::collections::VecDeque;

/// Result of a capped BFS around a center vertex.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: VertexId,
    /// Visited vertices in deterministic BFS order (center first).
    pub members: Vec<VertexId>,
    /// Hop distance per member, parallel to `members`.
    pub hops: Vec<u32>,
    /// BFS parent edge per member (`NO_PARENT` for the center).
    pub parent: Vec<EdgeId>,
    /// True iff the full ball has more than `cap` members and only the first
    /// `cap` were kept.
    pub truncated: bool,
}

impl Ball {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }

    /// BFS tree path from the center to a member, in graph vertices.
    pub fn path_to<W: Weight>(&self, g: &Graph<W>, v: VertexId) -> Option<Path<W>> {
        let idx = self.members.iter().position(|&m| m == v)?;
        let mut vertices = vec![v];
        let mut cur_idx = idx;
        while self.members[cur_idx] != self.center {
            let eid = self.parent[cur_idx];
            let prev = g.edge(eid).other(self.members[cur_idx]);
            vertices.push(prev);
            cur_idx = self.members.iter().position(|&m| m == prev).unwrap();
        }
        vertices.reverse();
        let length = g.path_length(&vertices)?;
        Some(Path { vertices, length })
    }
}

/// BFS ball of hop radius `hop_radius` around `u` in `g - forbidden`,
/// stopping after `cap` visited vertices. Neighbor expansion follows the
/// sorted adjacency lists, so the visit order is deterministic.
pub fn ball<W: Weight>(
    g: &Graph<W>,
    u: VertexId,
    hop_radius: u32,
    forbidden: &EdgeSet,
    cap: usize,
) -> Ball {
    assert!(cap >= 1, "cap must be at least 1");
    assert!((u as usize) < g.n(), "invalid center vertex {u}");
    let mut members = Vec::new();
    let mut hops = Vec::new();
    let mut parent = Vec::new();
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::new();
    seen[u as usize] = true;
    queue.push_back((u, 0u32, NO_PARENT));
    let mut truncated = false;
    while let Some((v, h, pe)) = queue.pop_front() {
        if members.len() == cap {
            truncated = true;
            break;
        }
        members.push(v);
        hops.push(h);
        parent.push(pe);
        if h == hop_radius {
            continue;
        }
        for &(nb, eid) in g.neighbors(v) {
            if seen[nb as usize] || forbidden.contains(eid) {
                continue;
            }
            seen[nb as usize] = true;
            queue.push_back((nb, h + 1, eid));
        }
    }
    Ball {
        center: u,
        members,
        hops,
        parent,
        truncated,
    }
}
