//! Deterministic single-source shortest paths with unique tie-breaking.
//!
//! Equal-length paths are ordered by hop count, then by a fixed per-edge
//! perturbation key summed along the path, and finally by predecessor vertex
//! id. The key realizes lexicographic perturbation symmetrically in both
//! search directions, so for every pair there is exactly one canonical
//! shortest path and subpaths of canonical paths are canonical themselves.

use crate::graph::{EdgeId, EdgeSet, Graph, Path, VertexId};
use crate::weight::Weight;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Fixed symmetric perturbation key for the edge {u, v}.
pub fn edge_tie_key(u: VertexId, v: VertexId) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    splitmix64(((a as u64) << 32) | b as u64)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D049BB133111EB);
    x ^ (x >> 31)
}

/// Composite path label: (length, hops, perturbation-key sum).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label<W> {
    pub dist: W,
    pub hops: u32,
    pub key: u128,
}

impl<W: Weight> Label<W> {
    pub fn zero() -> Self {
        Label {
            dist: W::zero(),
            hops: 0,
            key: 0,
        }
    }

    pub fn unreachable() -> Self {
        Label {
            dist: W::infinity(),
            hops: u32::MAX,
            key: u128::MAX,
        }
    }

    pub fn is_unreachable(&self) -> bool {
        self.dist.is_infinite()
    }

    pub fn extend(&self, w: W, u: VertexId, v: VertexId) -> Self {
        Label {
            dist: self.dist.add_sat(w),
            hops: self.hops + 1,
            key: self.key + edge_tie_key(u, v) as u128,
        }
    }

    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        self.dist
            .partial_cmp(&other.dist)
            .unwrap_or(Ordering::Equal)
            .then(self.hops.cmp(&other.hops))
            .then(self.key.cmp(&other.key))
    }
}

struct HeapItem<W> {
    label: Label<W>,
    vertex: VertexId,
}

impl<W: Weight> PartialEq for HeapItem<W> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<W: Weight> Eq for HeapItem<W> {}
impl<W: Weight> PartialOrd for HeapItem<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<W: Weight> Ord for HeapItem<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        // reversed for a min-heap
        other
            .label
            .cmp_lex(&self.label)
            .then(other.vertex.cmp(&self.vertex))
    }
}

/// Output of [`sssp`]: per-vertex label and parent edge id (`u32::MAX` at the
/// source and at unreachable vertices).
#[derive(Debug, Clone)]
pub struct SsspResult<W> {
    pub src: VertexId,
    pub labels: Vec<Label<W>>,
    pub parent: Vec<EdgeId>,
}

pub const NO_PARENT: EdgeId = u32::MAX;

impl<W: Weight> SsspResult<W> {
    pub fn dist(&self, v: VertexId) -> W {
        self.labels[v as usize].dist
    }

    pub fn dists(&self) -> Vec<W> {
        self.labels.iter().map(|l| l.dist).collect()
    }

    /// Canonical path from the source to `t`, or `None` if unreachable.
    pub fn path_to(&self, g: &Graph<W>, t: VertexId) -> Option<Path<W>> {
        if self.labels[t as usize].is_unreachable() {
            return None;
        }
        let mut vertices = vec![t];
        let mut cur = t;
        while cur != self.src {
            let eid = self.parent[cur as usize];
            debug_assert_ne!(eid, NO_PARENT);
            cur = g.edge(eid).other(cur);
            vertices.push(cur);
        }
        vertices.reverse();
        Some(Path {
            vertices,
            length: self.labels[t as usize].dist,
        })
    }

    /// Vertices in ascending settle order (the canonical closeness order).
    pub fn settle_order(&self) -> Vec<VertexId> {
        let mut order: Vec<VertexId> = (0..self.labels.len() as VertexId)
            .filter(|&v| !self.labels[v as usize].is_unreachable())
            .collect();
        order.sort_by(|&a, &b| {
            self.labels[a as usize]
                .cmp_lex(&self.labels[b as usize])
                .then(a.cmp(&b))
        });
        order
    }
}

/// Dijkstra from `src` in `g - forbidden` under the composite label order.
pub fn sssp<W: Weight>(g: &Graph<W>, src: VertexId, forbidden: &EdgeSet) -> SsspResult<W> {
    sssp_truncated(g, src, forbidden, usize::MAX).0
}

/// Dijkstra that stops early once `settle_cap` vertices are settled.
/// Returns the result plus the settled vertices in settle order.
pub fn sssp_truncated<W: Weight>(
    g: &Graph<W>,
    src: VertexId,
    forbidden: &EdgeSet,
    settle_cap: usize,
) -> (SsspResult<W>, Vec<VertexId>) {
    let n = g.n();
    assert!((src as usize) < n, "invalid source vertex {src}");
    let mut labels = vec![Label::unreachable(); n];
    let mut parent = vec![NO_PARENT; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    labels[src as usize] = Label::zero();
    heap.push(HeapItem {
        label: Label::zero(),
        vertex: src,
    });
    let mut order: Vec<VertexId> = Vec::new();
    while let Some(HeapItem { label, vertex }) = heap.pop() {
        if settled[vertex as usize] {
            continue;
        }
        settled[vertex as usize] = true;
        order.push(vertex);
        if order.len() >= settle_cap {
            break;
        }
        for &(nb, eid) in g.neighbors(vertex) {
            if settled[nb as usize] || forbidden.contains(eid) {
                continue;
            }
            let cand = label.extend(g.edge(eid).w, vertex, nb);
            let cur = &labels[nb as usize];
            let better = match cand.cmp_lex(cur) {
                Ordering::Less => true,
                Ordering::Equal => {
                    // final tie-break: lexicographically smallest predecessor
                    parent[nb as usize] != NO_PARENT
                        && vertex < g.edge(parent[nb as usize]).other(nb)
                }
                Ordering::Greater => false,
            };
            if better {
                labels[nb as usize] = cand;
                parent[nb as usize] = eid;
                heap.push(HeapItem {
                    label: cand,
                    vertex: nb,
                });
            }
        }
    }
    // on truncated runs, vertices outside the returned order may carry
    // tentative labels; callers must restrict themselves to the settled set
    (
        SsspResult {
            src,
            labels,
            parent,
        },
        order,
    )
}

/// Hop-bounded shortest paths: `dist[v]` is the minimum length over paths
/// from `src` to `v` with at most `hop_limit` edges in `g - forbidden`.
#[derive(Debug, Clone)]
pub struct HopBounded<W> {
    pub src: VertexId,
    pub labels: Vec<Label<W>>,
    pub parent: Vec<EdgeId>,
}

impl<W: Weight> HopBounded<W> {
    pub fn dist(&self, v: VertexId) -> W {
        self.labels[v as usize].dist
    }

    pub fn dists(&self) -> Vec<W> {
        self.labels.iter().map(|l| l.dist).collect()
    }

    pub fn path_to(&self, g: &Graph<W>, t: VertexId) -> Option<Path<W>> {
        if self.labels[t as usize].is_unreachable() {
            return None;
        }
        let mut vertices = vec![t];
        let mut cur = t;
        while cur != self.src {
            let eid = self.parent[cur as usize];
            cur = g.edge(eid).other(cur);
            vertices.push(cur);
        }
        vertices.reverse();
        Some(Path {
            vertices,
            length: self.labels[t as usize].dist,
        })
    }
}

/// Bellman-Ford-style rounds under the composite label order. With
/// `hop_limit >= n - 1` this coincides with [`sssp`].
pub fn hop_bounded_sssp<W: Weight>(
    g: &Graph<W>,
    src: VertexId,
    hop_limit: u32,
    forbidden: &EdgeSet,
) -> HopBounded<W> {
    assert!(hop_limit >= 1, "hop_limit must be at least 1");
    let n = g.n();
    assert!((src as usize) < n, "invalid source vertex {src}");
    let mut labels = vec![Label::unreachable(); n];
    let mut parent = vec![NO_PARENT; n];
    labels[src as usize] = Label::zero();
    let mut frontier = vec![src];
    for _round in 0..hop_limit {
        let mut next: Vec<VertexId> = Vec::new();
        for &v in &frontier {
            let label = labels[v as usize];
            for &(nb, eid) in g.neighbors(v) {
                if forbidden.contains(eid) {
                    continue;
                }
                let cand = label.extend(g.edge(eid).w, v, nb);
                let cur = &labels[nb as usize];
                let better = match cand.cmp_lex(cur) {
                    Ordering::Less => true,
                    Ordering::Equal => {
                        parent[nb as usize] != NO_PARENT
                            && v < g.edge(parent[nb as usize]).other(nb)
                    }
                    Ordering::Greater => false,
                };
                if better {
                    labels[nb as usize] = cand;
                    parent[nb as usize] = eid;
                    if !next.contains(&nb) {
                        next.push(nb);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        frontier = next;
    }
    HopBounded {
        src,
        labels,
        parent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph<u64> {
        Graph::from_edges(3, [(0, 1, 1u64), (1, 2, 1), (0, 2, 1)], false).unwrap()
    }

    #[test]
    fn triangle_dists() {
        let g = triangle();
        let r = sssp(&g, 0, &EdgeSet::new());
        assert_eq!(r.dists(), vec![0, 1, 1]);
    }

    #[test]
    fn triangle_single_detour() {
        let g = triangle();
        let f = EdgeSet::from_pairs(&g, &[(0, 1)]);
        let r = sssp(&g, 0, &f);
        assert_eq!(r.dist(1), 2);
        assert_eq!(r.path_to(&g, 1).unwrap().vertices, vec![0, 2, 1]);
    }

    #[test]
    fn hop_cutoff_on_path_graph() {
        let g = Graph::from_edges(4, [(0, 1, 1u64), (1, 2, 1), (2, 3, 1)], false).unwrap();
        let r2 = hop_bounded_sssp(&g, 0, 2, &EdgeSet::new());
        assert!(r2.dist(3).is_infinite());
        let r3 = hop_bounded_sssp(&g, 0, 3, &EdgeSet::new());
        assert_eq!(r3.dist(3), 3);
    }

    #[test]
    fn disconnected_is_infinite() {
        let g = Graph::from_edges(2, std::iter::empty::<(u32, u32, u64)>(), false).unwrap();
        let r = sssp(&g, 0, &EdgeSet::new());
        assert!(r.dist(1).is_infinite());
        assert!(r.path_to(&g, 1).is_none());
    }
}
