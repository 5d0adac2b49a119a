//! Structured replacement paths: decomposable paths and expaths.
//!
//! An l-decomposable path is a concatenation of at most l+1 canonical
//! shortest paths of the original graph, every fragment avoiding the removed
//! edges. An l-expath with granularity lambda is a prefix and suffix of at
//! most lambda edges around a chain of 2*ceil(log2 n)+1 l-decomposable
//! blocks, block i holding at most min(2^i, 2^(2*ceil(log2 n)-i)) edges.
//!
//! Shortest such paths are found by a layered search: regions (prefix,
//! blocks, suffix) are processed in order; within a region, labels carry the
//! hops spent inside it, kept as small Pareto sets per vertex because a
//! longer total length can still win by leaving more in-region budget.
//! Restricted to unweighted host graphs.

use num_bigint::BigUint;
use num_rational::Ratio;
use odo_core::{AllPairs, EdgeMask, Graph, Path, VertexId};
use serde::{Deserialize, Serialize};

/// Netpoint positions of an unweighted path with `len` edges: every position
/// if len <= lambda, otherwise the first and last lambda/2 vertices plus the
/// geometric (1+eps/24)-marks measured inward from both anchors (for each
/// power x, the furthest position with offset < x and its successor).
pub fn netpoints(len: usize, lambda: u32, eps: Ratio<u64>) -> Vec<u32> {
    if len <= lambda as usize {
        return (0..=len as u32).collect();
    }
    let mut pts: Vec<u32> = Vec::new();
    let half = lambda / 2;
    let left_anchor = half.saturating_sub(1) as usize;
    let right_anchor = len - left_anchor;
    pts.extend(0..=left_anchor as u32);
    pts.extend(right_anchor as u32..=len as u32);
    // exact rational powers: base = 1 + eps/24 = (24q + p) / 24q
    let num0 = BigUint::from(24 * eps.denom() + eps.numer());
    let den0 = BigUint::from(24 * *eps.denom());
    let mut num = num0.clone();
    let mut den = den0.clone();
    let span = (right_anchor - left_anchor) as u64;
    loop {
        // ceil(num/den)
        let ceil = (&num + &den - BigUint::from(1u32)) / &den;
        let Ok(off) = u64::try_from(&ceil) else { break };
        if off > span {
            break;
        }
        if off >= 1 {
            let mark = left_anchor as u64 + off;
            pts.push((mark - 1) as u32);
            pts.push(mark as u32);
            let rmark = right_anchor as u64 - off;
            pts.push((rmark + 1) as u32);
            pts.push(rmark as u32);
        }
        num *= &num0;
        den *= &den0;
    }
    pts.sort_unstable();
    pts.dedup();
    pts
}

/// Block hop caps of an expath on an n-vertex graph:
/// min(2^i, 2^(2B - i)) for i in 0..=2B with B = ceil(log2 n).
pub fn block_caps(n: usize) -> Vec<u64> {
    let b = n.max(1).next_power_of_two().trailing_zeros() as u64;
    (0..=2 * b).map(|i| 1u64 << i.min(2 * b - i)).collect()
}

/// A fragment of a structured path: a run that is one canonical shortest
/// path of G (prefix and suffix edges count as one-edge fragments).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment {
    /// Position range [start, end] into the vertex sequence.
    pub start: u32,
    pub end: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExPath {
    pub vertices: Vec<VertexId>,
    pub fragments: Vec<Fragment>,
}

impl ExPath {
    pub fn len_edges(&self) -> usize {
        self.vertices.len() - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RegionKind {
    EdgeMoves,
    FragmentMoves,
}

#[derive(Debug, Clone, Copy)]
struct Region {
    kind: RegionKind,
    hop_cap: u64,
    move_cap: u32,
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Root,
    /// Region boundary: same vertex, no movement.
    Entry {
        parent: u32,
    },
    Edge {
        parent: u32,
        from: VertexId,
    },
    Frag {
        parent: u32,
        from: VertexId,
    },
}

#[derive(Debug, Clone, Copy)]
struct LabelNode {
    vertex: VertexId,
    len: u64,
    used: u64,
    step: Step,
}

/// Shortest l-decomposable path from u to v in G - removed.
pub fn shortest_decomposable(
    g: &Graph<u64>,
    ap: &AllPairs<u64>,
    removed: &EdgeMask,
    u: VertexId,
    v: VertexId,
    ell: u32,
) -> Option<Path<u64>> {
    let regions = vec![Region {
        kind: RegionKind::FragmentMoves,
        hop_cap: u64::MAX,
        move_cap: ell + 1,
    }];
    let ex = layered_search(g, ap, removed, u, v, &regions)?;
    let length = ex.len_edges() as u64;
    Some(Path {
        vertices: ex.vertices,
        length,
    })
}

/// Shortest (2f+1)-expath with granularity lambda from u to v in G - removed,
/// with its fragment annotation.
pub fn shortest_expath(
    g: &Graph<u64>,
    ap: &AllPairs<u64>,
    removed: &EdgeMask,
    u: VertexId,
    v: VertexId,
    f: u32,
    lambda: u32,
) -> Option<ExPath> {
    let mut regions = Vec::new();
    if lambda > 0 {
        regions.push(Region {
            kind: RegionKind::EdgeMoves,
            hop_cap: lambda as u64,
            move_cap: lambda,
        });
    }
    for cap in block_caps(g.n()) {
        regions.push(Region {
            kind: RegionKind::FragmentMoves,
            hop_cap: cap,
            move_cap: 2 * f + 2,
        });
    }
    if lambda > 0 {
        regions.push(Region {
            kind: RegionKind::EdgeMoves,
            hop_cap: lambda as u64,
            move_cap: lambda,
        });
    }
    layered_search(g, ap, removed, u, v, &regions)
}

fn layered_search(
    g: &Graph<u64>,
    ap: &AllPairs<u64>,
    removed: &EdgeMask,
    u: VertexId,
    v: VertexId,
    regions: &[Region],
) -> Option<ExPath> {
    let n = g.n();
    if u == v {
        return Some(ExPath {
            vertices: vec![u],
            fragments: Vec::new(),
        });
    }
    // admissible fragments, resolved once per search
    let needs_fragments = regions.iter().any(|r| r.kind == RegionKind::FragmentMoves);
    let frag_ok: Vec<bool> = if needs_fragments {
        let mut ok = vec![false; n * n];
        for a in 0..n as VertexId {
            for b in 0..n as VertexId {
                if a != b
                    && ap.dist(a, b) != u64::MAX
                    && ap.path_avoids(g, a, b, removed)
                {
                    ok[a as usize * n + b as usize] = true;
                }
            }
        }
        ok
    } else {
        Vec::new()
    };
    let mut arena: Vec<LabelNode> = vec![LabelNode {
        vertex: u,
        len: 0,
        used: 0,
        step: Step::Root,
    }];
    // entry[x] = best (min len, then min arena id) label reaching x with all
    // previous regions consumed
    let mut entry: Vec<Option<u32>> = vec![None; n];
    entry[u as usize] = Some(0);

    for region in regions {
        let mut pareto: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut frontier: Vec<u32> = Vec::new();
        for x in 0..n {
            if let Some(idx) = entry[x] {
                let len = arena[idx as usize].len;
                let id = arena.len() as u32;
                arena.push(LabelNode {
                    vertex: x as VertexId,
                    len,
                    used: 0,
                    step: Step::Entry { parent: idx },
                });
                pareto[x].push(id);
                frontier.push(id);
            }
        }
        for _round in 0..region.move_cap {
            let mut next: Vec<u32> = Vec::new();
            for fi in 0..frontier.len() {
                let lab_id = frontier[fi];
                let lab = arena[lab_id as usize];
                let from = lab.vertex;
                // skip labels dominated since they were queued
                if !pareto[from as usize].contains(&lab_id) {
                    continue;
                }
                match region.kind {
                    RegionKind::EdgeMoves => {
                        for &(nb, eid) in g.neighbors(from) {
                            if removed.contains(eid) {
                                continue;
                            }
                            let w = g.edge(eid).w;
                            try_insert(
                                &mut arena,
                                &mut pareto,
                                &mut next,
                                nb,
                                lab.len + w,
                                lab.used + 1,
                                region.hop_cap,
                                Step::Edge {
                                    parent: lab_id,
                                    from,
                                },
                            );
                        }
                    }
                    RegionKind::FragmentMoves => {
                        for y in 0..n as VertexId {
                            if y == from || !frag_ok[from as usize * n + y as usize] {
                                continue;
                            }
                            let d = ap.dist(from, y);
                            let hops = ap.hops(from, y) as u64;
                            if lab.used.saturating_add(hops) > region.hop_cap {
                                continue;
                            }
                            try_insert(
                                &mut arena,
                                &mut pareto,
                                &mut next,
                                y,
                                lab.len + d,
                                lab.used + hops,
                                region.hop_cap,
                                Step::Frag {
                                    parent: lab_id,
                                    from,
                                },
                            );
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        for x in 0..n {
            entry[x] = pareto[x]
                .iter()
                .copied()
                .min_by_key(|&id| (arena[id as usize].len, id));
        }
    }

    let final_idx = entry[v as usize]?;
    Some(reconstruct(g, ap, &arena, final_idx))
}

#[allow(clippy::too_many_arguments)]
fn try_insert(
    arena: &mut Vec<LabelNode>,
    pareto: &mut [Vec<u32>],
    next: &mut Vec<u32>,
    vertex: VertexId,
    len: u64,
    used: u64,
    hop_cap: u64,
    step: Step,
) {
    if used > hop_cap {
        return;
    }
    let set = &mut pareto[vertex as usize];
    for &id in set.iter() {
        let l = &arena[id as usize];
        if l.len <= len && l.used <= used {
            return; // dominated (ties keep the incumbent)
        }
    }
    let id = arena.len() as u32;
    arena.push(LabelNode {
        vertex,
        len,
        used,
        step,
    });
    set.retain(|&old| {
        let l = &arena[old as usize];
        !(len <= l.len && used <= l.used)
    });
    set.push(id);
    next.push(id);
}

fn reconstruct(g: &Graph<u64>, ap: &AllPairs<u64>, arena: &[LabelNode], last: u32) -> ExPath {
    let mut moves: Vec<(VertexId, VertexId, RegionKind)> = Vec::new();
    let mut cur = last;
    loop {
        let node = arena[cur as usize];
        match node.step {
            Step::Root => break,
            Step::Entry { parent } => cur = parent,
            Step::Edge { parent, from } => {
                moves.push((from, node.vertex, RegionKind::EdgeMoves));
                cur = parent;
            }
            Step::Frag { parent, from } => {
                moves.push((from, node.vertex, RegionKind::FragmentMoves));
                cur = parent;
            }
        }
    }
    moves.reverse();
    let mut vertices: Vec<VertexId> = vec![arena[0].vertex];
    let mut fragments = Vec::new();
    for (from, to, kind) in moves {
        debug_assert_eq!(*vertices.last().unwrap(), from);
        let start = vertices.len() as u32 - 1;
        match kind {
            RegionKind::EdgeMoves => vertices.push(to),
            RegionKind::FragmentMoves => {
                let frag = ap.path(g, from, to).expect("fragment path exists");
                vertices.extend(frag.vertices.iter().skip(1));
            }
        }
        fragments.push(Fragment {
            start,
            end: vertices.len() as u32 - 1,
        });
    }
    ExPath {
        vertices,
        fragments,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::connected_erdos_renyi;

    #[test]
    fn netpoints_short_path_every_vertex() {
        assert_eq!(netpoints(3, 4, Ratio::new(1, 1)), vec![0, 1, 2, 3]);
    }

    #[test]
    fn netpoints_geometric_marks_base_two() {
        // eps = 24 gives base 2; lambda = 4 anchors at offset 1 from each end
        let pts = netpoints(100, 4, Ratio::new(24, 1));
        assert!(pts.contains(&0) && pts.contains(&1));
        assert!(pts.contains(&100) && pts.contains(&99));
        // left marks at anchor(=1) + 2^i and predecessors
        for off in [1u32, 2, 4, 8, 16, 32, 64] {
            assert!(pts.contains(&(1 + off)), "missing left mark {off}");
            assert!(pts.contains(&(off)), "missing left mark pred {off}");
        }
        // right marks mirrored from position 99
        for off in [1u32, 2, 4, 8, 16, 32, 64] {
            assert!(pts.contains(&(99 - off)), "missing right mark {off}");
        }
    }

    #[test]
    fn netpoint_count_stays_within_bound() {
        let eps = Ratio::new(1, 1);
        for len in [10usize, 40, 100, 400] {
            let lambda = 4;
            let pts = netpoints(len, lambda, eps);
            // lambda + 2 log_{1+eps/24}(n) + 4 marks, each mark a pair
            let log_bound = ((len as f64).ln() / (1.0f64 + 1.0 / 24.0).ln()).ceil();
            let bound = lambda as f64 + 4.0 * log_bound + 8.0;
            assert!(
                (pts.len() as f64) <= bound,
                "len {len}: {} netpoints > bound {bound}",
                pts.len()
            );
        }
    }

    #[test]
    fn decomposable_zero_removed_is_plain_shortest_path() {
        let g = connected_erdos_renyi(20, 0.15, 1, 1, 3);
        let ap = AllPairs::build(&g);
        let removed = EdgeMask::empty(g.m());
        for u in 0..5u32 {
            for v in 5..10u32 {
                let p = shortest_decomposable(&g, &ap, &removed, u, v, 0).unwrap();
                assert_eq!(p.length, ap.dist(u, v));
            }
        }
    }

    #[test]
    fn decomposable_zero_fragments_blocked_by_removed_edge() {
        // path graph: the only shortest path uses every edge
        let g: Graph<u64> =
            Graph::from_edges(4, (0..3u32).map(|i| (i, i + 1, 1u64)), false).unwrap();
        let ap = AllPairs::build(&g);
        let mut removed = EdgeMask::empty(g.m());
        removed.insert(g.edge_id(1, 2).unwrap());
        assert!(shortest_decomposable(&g, &ap, &removed, 0, 3, 0).is_none());
    }

    #[test]
    fn expath_short_distance_fits_in_prefix() {
        let g = connected_erdos_renyi(16, 0.3, 1, 1, 9);
        let ap = AllPairs::build(&g);
        let removed = EdgeMask::empty(g.m());
        for u in 0..4u32 {
            for v in 4..8u32 {
                if ap.dist(u, v) > 2 {
                    continue;
                }
                let ex = shortest_expath(&g, &ap, &removed, u, v, 2, 4).unwrap();
                assert_eq!(ex.len_edges() as u64, ap.dist(u, v));
            }
        }
    }

    #[test]
    fn expath_disconnected_is_none() {
        let g: Graph<u64> =
            Graph::from_edges(4, [(0, 1, 1u64), (2, 3, 1)], false).unwrap();
        let ap = AllPairs::build(&g);
        let removed = EdgeMask::empty(g.m());
        assert!(shortest_expath(&g, &ap, &removed, 0, 3, 1, 2).is_none());
    }

    #[test]
    fn expath_fragments_tile_the_path() {
        let g = connected_erdos_renyi(24, 0.1, 1, 1, 17);
        let ap = AllPairs::build(&g);
        let mut removed = EdgeMask::empty(g.m());
        removed.insert(0);
        removed.insert(3);
        for u in 0..6u32 {
            for v in 6..12u32 {
                if let Some(ex) = shortest_expath(&g, &ap, &removed, u, v, 2, 2) {
                    // fragments cover the vertex sequence contiguously
                    let mut pos = 0u32;
                    for f in &ex.fragments {
                        assert_eq!(f.start, pos);
                        assert!(f.end > f.start);
                        pos = f.end;
                    }
                    assert_eq!(pos as usize, ex.vertices.len() - 1);
                    // every edge exists and avoids the removed set
                    for w in ex.vertices.windows(2) {
                        let eid = g.edge_id(w[0], w[1]).expect("edge exists");
                        assert!(!removed.contains(eid));
                    }
                }
            }
        }
    }
}
