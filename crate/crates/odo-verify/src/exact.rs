//! The universal exact oracle: Dijkstra on G - F.

use odo_core::{sssp, EdgeSet, Graph, Path, VertexId, Weight};

/// d(s, t, F), the replacement distance.
pub fn exact_replacement_distance<W: Weight>(
    g: &Graph<W>,
    s: VertexId,
    t: VertexId,
    fail: &EdgeSet,
) -> W {
    sssp(g, s, fail).dist(t)
}

/// The canonical replacement path, when one exists.
pub fn exact_replacement_path<W: Weight>(
    g: &Graph<W>,
    s: VertexId,
    t: VertexId,
    fail: &EdgeSet,
) -> Option<Path<W>> {
    sssp(g, s, fail).path_to(g, t)
}

/// Cached exact oracle: one Dijkstra per queried (source, failure set).
pub struct ExactOracle<'a, W: Weight> {
    g: &'a Graph<W>,
    cache: std::collections::HashMap<(VertexId, Vec<u32>), Vec<W>>,
}

impl<'a, W: Weight> ExactOracle<'a, W> {
    pub fn new(g: &'a Graph<W>) -> Self {
        ExactOracle {
            g,
            cache: std::collections::HashMap::new(),
        }
    }

    pub fn dist(&mut self, s: VertexId, t: VertexId, fail: &EdgeSet) -> W {
        let key = (s, fail.ids().to_vec());
        let dists = self
            .cache
            .entry(key)
            .or_insert_with(|| sssp(self.g, s, fail).dists());
        dists[t as usize]
    }
}
