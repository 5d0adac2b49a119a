//! Immutable undirected graphs in compressed adjacency form.
//!
//! Edge ids are canonical: edges are sorted by their (min, max) endpoint pair
//! and the id is the position in that order, so a set of edge ids means the
//! same thing in every structure derived from the graph.

use crate::weight::Weight;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(VertexId, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("negative weight on edge ({0}, {1})")]
    NegativeWeight(VertexId, VertexId),
    #[error("zero-weight edge ({0}, {1}) in unweighted mode")]
    ZeroWeightUnweighted(VertexId, VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge<W> {
    pub u: VertexId,
    pub v: VertexId,
    pub w: W,
}

impl<W: Weight> Edge<W> {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable weighted or unweighted undirected graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Graph<W> {
    n: usize,
    edges: Vec<Edge<W>>,
    /// Per-vertex `(neighbor, edge_id)`, sorted by neighbor id.
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    is_weighted: bool,
    max_weight: W,
    component: Vec<u32>,
}

impl<W: Weight> Graph<W> {
    /// Builds a graph from an edge list. Duplicate edges collapse keeping the
    /// minimum weight; endpoints are canonicalized to `(min, max)`.
    pub fn from_edges(
        n: usize,
        raw: impl IntoIterator<Item = (VertexId, VertexId, W)>,
        is_weighted: bool,
    ) -> Result<Self, GraphError> {
        let mut pairs: Vec<(VertexId, VertexId, W)> = Vec::new();
        for (u, v, w) in raw {
            if u as usize >= n {
                return Err(GraphError::VertexOutOfRange(u, n));
            }
            if v as usize >= n {
                return Err(GraphError::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if w < W::zero() {
                return Err(GraphError::NegativeWeight(u, v));
            }
            if !is_weighted && w.is_zero() {
                return Err(GraphError::ZeroWeightUnweighted(u, v));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            pairs.push((a, b, w));
        }
        pairs.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut edges: Vec<Edge<W>> = Vec::with_capacity(pairs.len());
        for (u, v, w) in pairs {
            match edges.last_mut() {
                Some(last) if last.u == u && last.v == v => {
                    if w < last.w {
                        last.w = w;
                    }
                }
                _ => edges.push(Edge { u, v, w }),
            }
        }
        let mut adj = vec![Vec::new(); n];
        let mut max_weight = W::zero();
        for (id, e) in edges.iter().enumerate() {
            adj[e.u as usize].push((e.v, id as EdgeId));
            adj[e.v as usize].push((e.u, id as EdgeId));
            if e.w > max_weight {
                max_weight = e.w;
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let component = components(n, &adj);
        Ok(Graph {
            n,
            edges,
            adj,
            is_weighted,
            max_weight,
            component,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.is_weighted
    }

    /// Maximum edge weight W (zero on an empty graph).
    pub fn max_weight(&self) -> W {
        self.max_weight
    }

    pub fn edge(&self, id: EdgeId) -> &Edge<W> {
        &self.edges[id as usize]
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v as usize]
    }

    /// Canonical edge id of the pair `{u, v}`, if present.
    pub fn edge_id(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        if u as usize >= self.n || v as usize >= self.n || u == v {
            return None;
        }
        let list = &self.adj[u as usize];
        list.binary_search_by_key(&v, |&(nb, _)| nb)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn component_of(&self, v: VertexId) -> u32 {
        self.component[v as usize]
    }

    pub fn same_component(&self, u: VertexId, v: VertexId) -> bool {
        self.component[u as usize] == self.component[v as usize]
    }

    /// Size of the connected component containing `v`.
    pub fn component_size(&self, v: VertexId) -> usize {
        let c = self.component[v as usize];
        self.component.iter().filter(|&&x| x == c).count()
    }

    /// Standalone spanning subgraph with the edges of `removed` dropped.
    /// Vertex ids are shared with the host graph; edge ids are not.
    pub fn without_edges(&self, removed: &EdgeMask) -> Graph<W> {
        let kept = self
            .edges
            .iter()
            .enumerate()
            .filter(|(id, _)| !removed.contains(*id as EdgeId))
            .map(|(_, e)| (e.u, e.v, e.w));
        Graph::from_edges(self.n, kept, self.is_weighted).expect("subgraph of a valid graph")
    }

    /// Maps a vertex sequence to the edge ids it traverses; `None` if some
    /// hop is not an edge of this graph.
    pub fn path_edge_ids(&self, vertices: &[VertexId]) -> Option<Vec<EdgeId>> {
        vertices
            .windows(2)
            .map(|w| self.edge_id(w[0], w[1]))
            .collect()
    }

    /// Sum of edge weights along a vertex sequence; `None` if invalid.
    pub fn path_length(&self, vertices: &[VertexId]) -> Option<W> {
        let mut total = W::zero();
        for w in vertices.windows(2) {
            let id = self.edge_id(w[0], w[1])?;
            total = total.add_sat(self.edges[id as usize].w);
        }
        Some(total)
    }

    /// Words of an explicit copy of the graph (per edge: endpoints + weight).
    pub fn space_words(&self) -> u64 {
        3 * self.edges.len() as u64 + self.n as u64
    }
}

fn components(n: usize, adj: &[Vec<(VertexId, EdgeId)>]) -> Vec<u32> {
    let mut comp = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        comp[s] = next;
        stack.push(s as VertexId);
        while let Some(v) = stack.pop() {
            for &(nb, _) in &adj[v as usize] {
                if comp[nb as usize] == u32::MAX {
                    comp[nb as usize] = next;
                    stack.push(nb);
                }
            }
        }
        next += 1;
    }
    comp
}

/// A path in a host graph: ordered vertices plus derived length and hops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path<W> {
    pub vertices: Vec<VertexId>,
    pub length: W,
}

impl<W: Weight> Path<W> {
    pub fn single(v: VertexId) -> Self {
        Path {
            vertices: vec![v],
            length: W::zero(),
        }
    }

    pub fn hops(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn source(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn target(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    /// First edge id of `self` shared with `fail`, scanning in path order and
    /// taking the minimum edge id among ties within one hop (ids are unique
    /// per hop, so this is the first hit).
    pub fn first_failed_edge(&self, g: &Graph<W>, fail: &EdgeSet) -> Option<EdgeId> {
        let mut best: Option<EdgeId> = None;
        for w in self.vertices.windows(2) {
            if let Some(id) = g.edge_id(w[0], w[1]) {
                if fail.contains(id) {
                    best = Some(match best {
                        Some(b) => b.min(id),
                        None => id,
                    });
                }
            }
        }
        best
    }

    pub fn intersects(&self, g: &Graph<W>, fail: &EdgeSet) -> bool {
        self.first_failed_edge(g, fail).is_some()
    }
}

/// Small failure set: sorted edge ids, constant-ish membership, |F| <= f.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSet {
    ids: Vec<EdgeId>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet { ids: Vec::new() }
    }

    pub fn from_ids(mut ids: Vec<EdgeId>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        EdgeSet { ids }
    }

    /// Resolves vertex pairs against the graph, silently dropping pairs that
    /// are not edges: the result represents F ∩ E.
    pub fn from_pairs<W: Weight>(g: &Graph<W>, pairs: &[(VertexId, VertexId)]) -> Self {
        Self::from_ids(
            pairs
                .iter()
                .filter_map(|&(u, v)| g.edge_id(u, v))
                .collect(),
        )
    }

    pub fn insert(&mut self, id: EdgeId) {
        if let Err(pos) = self.ids.binary_search(&id) {
            self.ids.insert(pos, id);
        }
    }

    pub fn with(&self, id: EdgeId) -> Self {
        let mut out = self.clone();
        out.insert(id);
        out
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[EdgeId] {
        &self.ids
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        self.ids.iter().all(|id| other.contains(*id))
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ids.iter().copied()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<T: IntoIterator<Item = EdgeId>>(iter: T) -> Self {
        EdgeSet::from_ids(iter.into_iter().collect())
    }
}

/// Dense edge subset over a host graph, used for the large removed-edge sets
/// of covering subgraphs and FT-tree nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeMask {
    bits: Vec<u64>,
    count: u32,
}

impl EdgeMask {
    pub fn empty(m: usize) -> Self {
        EdgeMask {
            bits: vec![0; m.div_ceil(64)],
            count: 0,
        }
    }

    pub fn from_edge_set(m: usize, set: &EdgeSet) -> Self {
        let mut mask = Self::empty(m);
        for id in set.iter() {
            mask.insert(id);
        }
        mask
    }

    pub fn insert(&mut self, id: EdgeId) {
        let (word, bit) = (id as usize / 64, id as usize % 64);
        if self.bits[word] & (1 << bit) == 0 {
            self.bits[word] |= 1 << bit;
            self.count += 1;
        }
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        let (word, bit) = (id as usize / 64, id as usize % 64);
        self.bits
            .get(word)
            .is_some_and(|w| w & (1 << bit) != 0)
    }

    pub fn contains_all(&self, set: &EdgeSet) -> bool {
        set.iter().all(|id| self.contains(id))
    }

    pub fn len(&self) -> usize {
        self.count as usize
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn union_with(&mut self, other: &EdgeMask) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
        self.count = self.bits.iter().map(|w| w.count_ones()).sum();
    }

    pub fn iter_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1u64 << b) != 0)
                .map(move |b| (wi * 64 + b) as EdgeId)
        })
    }
}
