//! Exhaustive reference oracles for structured-path distances.
//!
//! Both oracles enumerate every admissible fragment concatenation through
//! plain table filling (min-plus powers for decomposable paths, a dense
//! moves-by-budget table for expaths) and are deliberately independent of
//! the layered search used in production. Guarded to tiny instances.

use odo_core::{AllPairs, EdgeMask, Graph, VertexId};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BruteError {
    #[error("instance too large for exhaustive mode: n = {0} (limit {1})")]
    TooLarge(usize, usize),
}

const SIZE_GUARD: usize = 32;

/// Fragment matrix: M[u][v] = d_G(u, v) when the canonical shortest u-v path
/// avoids `removed`, else infinity. Avoidance is re-derived edge by edge.
fn fragment_matrix(g: &Graph<u64>, ap: &AllPairs<u64>, removed: &EdgeMask) -> Vec<Vec<u64>> {
    let n = g.n();
    let mut m = vec![vec![u64::MAX; n]; n];
    for u in 0..n as VertexId {
        m[u as usize][u as usize] = 0;
        for v in 0..n as VertexId {
            if u == v || ap.dist(u, v) == u64::MAX {
                continue;
            }
            let path = ap.path(g, u, v).unwrap();
            let clean = path
                .vertices
                .windows(2)
                .all(|w| !removed.contains(g.edge_id(w[0], w[1]).unwrap()));
            if clean {
                m[u as usize][v as usize] = ap.dist(u, v);
            }
        }
    }
    m
}

fn min_plus(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut out = vec![vec![u64::MAX; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == u64::MAX {
                continue;
            }
            for j in 0..n {
                if b[k][j] == u64::MAX {
                    continue;
                }
                let cand = a[i][k] + b[k][j];
                if cand < out[i][j] {
                    out[i][j] = cand;
                }
            }
        }
    }
    out
}

/// Length of the shortest l-decomposable u-v path in G - removed, by
/// (l+1)-fold min-plus powering of the fragment matrix.
pub fn exact_decomposable_distance(
    g: &Graph<u64>,
    ap: &AllPairs<u64>,
    removed: &EdgeMask,
    u: VertexId,
    v: VertexId,
    ell: u32,
) -> Result<u64, BruteError> {
    if g.n() > SIZE_GUARD {
        return Err(BruteError::TooLarge(g.n(), SIZE_GUARD));
    }
    let m = fragment_matrix(g, ap, removed);
    let mut acc = m.clone();
    for _ in 0..ell {
        acc = min_plus(&acc, &m);
    }
    Ok(acc[u as usize][v as usize])
}

/// Length of the shortest (2f+1)-expath with granularity lambda from u to v
/// in G - removed, by dense per-region tables over (moves, hops-in-region).
pub fn exact_expath_distance(
    g: &Graph<u64>,
    ap: &AllPairs<u64>,
    removed: &EdgeMask,
    u: VertexId,
    v: VertexId,
    f: u32,
    lambda: u32,
) -> Result<u64, BruteError> {
    if g.n() > SIZE_GUARD {
        return Err(BruteError::TooLarge(g.n(), SIZE_GUARD));
    }
    let n = g.n();
    if u == v {
        return Ok(0);
    }
    let frag = fragment_matrix(g, ap, removed);
    // region list: prefix, blocks, suffix
    struct Reg {
        edges_only: bool,
        hop_cap: usize,
        move_cap: usize,
    }
    let mut regions = Vec::new();
    if lambda > 0 {
        regions.push(Reg {
            edges_only: true,
            hop_cap: lambda as usize,
            move_cap: lambda as usize,
        });
    }
    for cap in odo_dso_block_caps(n) {
        regions.push(Reg {
            edges_only: false,
            hop_cap: cap.min(n as u64) as usize,
            move_cap: (2 * f + 2) as usize,
        });
    }
    if lambda > 0 {
        regions.push(Reg {
            edges_only: true,
            hop_cap: lambda as usize,
            move_cap: lambda as usize,
        });
    }

    let mut entry = vec![u64::MAX; n];
    entry[u as usize] = 0;
    for reg in &regions {
        // table[c][x] = min length reaching x with exactly c hops spent here
        let mut table = vec![vec![u64::MAX; n]; reg.hop_cap + 1];
        table[0].copy_from_slice(&entry);
        for _mv in 0..reg.move_cap {
            let snapshot = table.clone();
            for c in 0..=reg.hop_cap {
                for x in 0..n {
                    let base = snapshot[c][x];
                    if base == u64::MAX {
                        continue;
                    }
                    if reg.edges_only {
                        if c + 1 > reg.hop_cap {
                            continue;
                        }
                        for &(nb, eid) in g.neighbors(x as VertexId) {
                            if removed.contains(eid) {
                                continue;
                            }
                            let cand = base + g.edge(eid).w;
                            if cand < table[c + 1][nb as usize] {
                                table[c + 1][nb as usize] = cand;
                            }
                        }
                    } else {
                        for y in 0..n {
                            let d = frag[x][y];
                            if y == x || d == u64::MAX {
                                continue;
                            }
                            let hops = ap.hops(x as VertexId, y as VertexId) as usize;
                            if c + hops > reg.hop_cap {
                                continue;
                            }
                            let cand = base + d;
                            if cand < table[c + hops][y] {
                                table[c + hops][y] = cand;
                            }
                        }
                    }
                }
            }
        }
        for x in 0..n {
            entry[x] = table.iter().map(|row| row[x]).min().unwrap();
        }
    }
    Ok(entry[v as usize])
}

// block caps mirrored locally so this oracle does not depend on odo-dso
fn odo_dso_block_caps(n: usize) -> Vec<u64> {
    let b = n.max(1).next_power_of_two().trailing_zeros() as u64;
    (0..=2 * b).map(|i| 1u64 << i.min(2 * b - i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use odo_core::gen::connected_erdos_renyi;

    #[test]
    fn ell_zero_without_failures_is_plain_distance() {
        let g = connected_erdos_renyi(10, 0.2, 1, 1, 5);
        let ap = AllPairs::build(&g);
        let removed = EdgeMask::empty(g.m());
        for u in 0..5u32 {
            for v in 5..10u32 {
                assert_eq!(
                    exact_decomposable_distance(&g, &ap, &removed, u, v, 0).unwrap(),
                    ap.dist(u, v)
                );
            }
        }
    }

    #[test]
    fn size_guard_refuses() {
        let g = connected_erdos_renyi(40, 0.1, 1, 1, 5);
        let ap = AllPairs::build(&g);
        let removed = EdgeMask::empty(g.m());
        assert!(exact_decomposable_distance(&g, &ap, &removed, 0, 1, 2).is_err());
    }

    #[test]
    fn large_ell_equals_replacement_distance_on_unweighted() {
        // every path is a concatenation of single-edge shortest paths, so with
        // ell >= |F| the Afek decomposition makes both oracles agree
        let g = connected_erdos_renyi(12, 0.25, 1, 1, 7);
        let ap = AllPairs::build(&g);
        for fail_edges in [vec![0u32], vec![1, 3]] {
            let mut removed = EdgeMask::empty(g.m());
            let mut fail = odo_core::EdgeSet::new();
            for e in &fail_edges {
                removed.insert(*e);
                fail.insert(*e);
            }
            for u in 0..6u32 {
                for v in 6..12u32 {
                    let exact = crate::exact::exact_replacement_distance(&g, u, v, &fail);
                    let dec =
                        exact_decomposable_distance(&g, &ap, &removed, u, v, g.n() as u32)
                            .unwrap();
                    assert_eq!(dec, exact, "({u},{v}) F={fail_edges:?}");
                }
            }
        }
    }
}
