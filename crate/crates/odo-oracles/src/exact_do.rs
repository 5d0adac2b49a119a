//! Exact path-reporting distance oracle: a stored all-pairs index.
//!
//! Trades space for precision; useful standalone on small graphs and as the
//! (1, 0)-stretch inner oracle of the fault-tolerance transformation.

use odo_core::sssp::NO_PARENT;
use odo_core::{sssp, EdgeId, EdgeSet, Graph, Path, VertexId, Weight};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactDo<W> {
    graph: Graph<W>,
    dist: Vec<W>,
    parent: Vec<EdgeId>,
}

impl<W: Weight> ExactDo<W> {
    pub fn build(g: &Graph<W>) -> Self {
        let n = g.n();
        let mut dist = vec![W::infinity(); n * n];
        let mut parent = vec![NO_PARENT; n * n];
        let empty = EdgeSet::new();
        for src in 0..n as VertexId {
            let r = sssp(g, src, &empty);
            for v in 0..n {
                dist[src as usize * n + v] = r.labels[v].dist;
                parent[src as usize * n + v] = r.parent[v];
            }
        }
        ExactDo {
            graph: g.clone(),
            dist,
            parent,
        }
    }

    pub fn graph(&self) -> &Graph<W> {
        &self.graph
    }

    pub fn query(&self, s: VertexId, t: VertexId) -> W {
        self.dist[s as usize * self.graph.n() + t as usize]
    }

    pub fn query_path(&self, s: VertexId, t: VertexId) -> (W, Option<Path<W>>) {
        let d = self.query(s, t);
        if d.is_infinite() {
            return (d, None);
        }
        let n = self.graph.n();
        let mut vertices = vec![t];
        let mut cur = t;
        while cur != s {
            let eid = self.parent[s as usize * n + cur as usize];
            cur = self.graph.edge(eid).other(cur);
            vertices.push(cur);
        }
        vertices.reverse();
        (
            d,
            Some(Path {
                vertices,
                length: d,
            }),
        )
    }

    pub fn space_words(&self) -> u64 {
        2 * self.dist.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::erdos_renyi;

    #[test]
    fn exact_and_path_reporting() {
        let g = erdos_renyi(25, 0.15, 1, 6, 14);
        let oracle = ExactDo::build(&g);
        for s in 0..g.n() as u32 {
            let r = sssp(&g, s, &EdgeSet::new());
            for t in 0..g.n() as u32 {
                assert_eq!(oracle.query(s, t), r.dist(t));
                let (d, p) = oracle.query_path(s, t);
                if d != u64::MAX && s != t {
                    assert_eq!(g.path_length(&p.unwrap().vertices), Some(d));
                }
            }
        }
    }
}
