//! Trapezoid neighborhoods around replacement paths.
//!
//! A path is far away from the failures when its widening neighborhood
//! avoids every failure endpoint; the widening radius at a path vertex is
//! an eps/6 multiple of its distance to the nearer path endpoint.

use num_rational::Ratio;
use odo_core::{sssp, EdgeSet, Graph, VertexId};

/// The eps/6-trapezoid around `path` in G - fail: all vertices z (excluding
/// the endpoints) with d_{G-F}(y, z) <= (eps/6) * min(|P[u..y]|, |P[y..v]|)
/// for some path vertex y.
pub fn trapezoid(
    g: &Graph<u64>,
    fail: &EdgeSet,
    path: &[VertexId],
    eps: Ratio<u64>,
) -> Vec<VertexId> {
    let total = path.len() - 1;
    let (u, v) = (path[0], path[total]);
    let mut members = Vec::new();
    for (i, &y) in path.iter().enumerate() {
        let head = i as u64;
        let tail = (total - i) as u64;
        let radius_num = eps.numer() * head.min(tail);
        let radius_den = 6 * eps.denom();
        let dists = sssp(g, y, fail);
        for z in 0..g.n() as VertexId {
            if z == u || z == v {
                continue;
            }
            let d = dists.dist(z);
            if d != u64::MAX && (d as u128) * (radius_den as u128) <= (radius_num as u128) {
                members.push(z);
            }
        }
    }
    members.sort_unstable();
    members.dedup();
    members
}

/// True iff the trapezoid around `path` avoids every endpoint of `fail`.
pub fn far_away(g: &Graph<u64>, fail: &EdgeSet, path: &[VertexId], eps: Ratio<u64>) -> bool {
    let tr = trapezoid(g, fail, path, eps);
    !fail.iter().any(|e| {
        let edge = g.edge(e);
        tr.binary_search(&edge.u).is_ok() || tr.binary_search(&edge.v).is_ok()
    })
}
