//! Oracle-backed checks of the graph substrate: every nontrivial expectation
//! is recomputed by an independent reference algorithm.

use odo_core::gen::{connected_erdos_renyi, erdos_renyi};
use odo_core::sssp::NO_PARENT;
use odo_core::{ball, hop_bounded_sssp, sssp, EdgeSet, Graph, LcaIndex, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reference for sssp: repeated edge relaxations until a fixed point.
fn bellman_ford(g: &Graph<u64>, src: VertexId, forbidden: &EdgeSet) -> Vec<u64> {
    let mut dist = vec![u64::MAX; g.n()];
    dist[src as usize] = 0;
    loop {
        let mut changed = false;
        for (id, e) in g.edges().iter().enumerate() {
            if forbidden.contains(id as u32) {
                continue;
            }
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if dist[a as usize] != u64::MAX && dist[a as usize] + e.w < dist[b as usize] {
                    dist[b as usize] = dist[a as usize] + e.w;
                    changed = true;
                }
            }
        }
        if !changed {
            return dist;
        }
    }
}

/// Reference for hop_bounded_sssp: k rounds of relaxation.
fn bounded_bellman_ford(g: &Graph<u64>, src: VertexId, rounds: u32) -> Vec<u64> {
    let mut dist = vec![u64::MAX; g.n()];
    dist[src as usize] = 0;
    for _ in 0..rounds {
        let prev = dist.clone();
        for e in g.edges() {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if prev[a as usize] != u64::MAX && prev[a as usize] + e.w < dist[b as usize] {
                    dist[b as usize] = prev[a as usize] + e.w;
                }
            }
        }
    }
    dist
}

/// Reference for ball: plain uncapped BFS membership.
fn bfs_ball(g: &Graph<u64>, u: VertexId, radius: u32, forbidden: &EdgeSet) -> Vec<VertexId> {
    let mut seen = vec![false; g.n()];
    let mut queue = std::collections::VecDeque::new();
    let mut out = Vec::new();
    seen[u as usize] = true;
    queue.push_back((u, 0u32));
    while let Some((v, h)) = queue.pop_front() {
        out.push(v);
        if h == radius {
            continue;
        }
        for &(nb, eid) in g.neighbors(v) {
            if !seen[nb as usize] && !forbidden.contains(eid) {
                seen[nb as usize] = true;
                queue.push_back((nb, h + 1));
            }
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn sssp_matches_bellman_ford_seed7() {
    let g = erdos_renyi(50, 0.12, 1, 9, 7);
    for src in [0u32, 13, 49] {
        let r = sssp(&g, src, &EdgeSet::new());
        assert_eq!(r.dists(), bellman_ford(&g, src, &EdgeSet::new()));
    }
}

#[test]
fn sssp_with_failures_matches_bellman_ford() {
    let g = connected_erdos_renyi(40, 0.1, 1, 6, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let f = EdgeSet::from_ids(
            (0..3)
                .map(|_| rng.gen_range(0..g.m() as u32))
                .collect::<Vec<_>>(),
        );
        let src = rng.gen_range(0..g.n() as u32);
        let r = sssp(&g, src, &f);
        assert_eq!(r.dists(), bellman_ford(&g, src, &f));
    }
}

#[test]
fn hop_bounded_matches_bounded_bellman_ford() {
    let g = erdos_renyi(30, 0.15, 1, 7, 21);
    for limit in [1u32, 2, 4] {
        for src in [0u32, 17] {
            let r = hop_bounded_sssp(&g, src, limit, &EdgeSet::new());
            assert_eq!(r.dists(), bounded_bellman_ford(&g, src, limit));
        }
    }
}

#[test]
fn hop_bound_n_minus_one_equals_sssp() {
    let g = erdos_renyi(25, 0.2, 1, 5, 9);
    for src in 0..5u32 {
        let full = sssp(&g, src, &EdgeSet::new());
        let bounded = hop_bounded_sssp(&g, src, g.n() as u32 - 1, &EdgeSet::new());
        assert_eq!(full.dists(), bounded.dists());
    }
}

#[test]
fn sssp_parent_arrays_are_reproducible() {
    let g = erdos_renyi(60, 0.1, 1, 10, 77);
    for src in [0u32, 30, 59] {
        let a = sssp(&g, src, &EdgeSet::new());
        let b = sssp(&g, src, &EdgeSet::new());
        assert_eq!(a.parent, b.parent);
    }
}

#[test]
fn unique_shortest_paths_are_direction_symmetric() {
    // unweighted graphs maximize ties, the hard case for uniqueness
    let g = erdos_renyi(40, 0.12, 1, 1, 13);
    let results: Vec<_> = (0..g.n() as u32)
        .map(|s| sssp(&g, s, &EdgeSet::new()))
        .collect();
    for s in 0..g.n() as u32 {
        for t in s + 1..g.n() as u32 {
            if results[s as usize].dist(t) == u64::MAX {
                continue;
            }
            let fwd = results[s as usize].path_to(&g, t).unwrap();
            let mut bwd = results[t as usize].path_to(&g, s).unwrap();
            bwd.vertices.reverse();
            assert_eq!(fwd.vertices, bwd.vertices, "pair ({s},{t})");
        }
    }
}

#[test]
fn triangle_inequality_on_sssp_output() {
    let g = erdos_renyi(45, 0.12, 1, 8, 31);
    let r = sssp(&g, 4, &EdgeSet::new());
    for e in g.edges() {
        let (du, dv) = (r.dist(e.u), r.dist(e.v));
        if dv != u64::MAX {
            assert!(du <= dv.saturating_add(e.w));
        }
        if du != u64::MAX {
            assert!(dv <= du.saturating_add(e.w));
        }
    }
}

#[test]
fn ball_agrees_with_plain_bfs() {
    let g = erdos_renyi(48, 0.1, 1, 1, 19);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..40 {
        let u = rng.gen_range(0..g.n() as u32);
        let f = EdgeSet::from_ids(vec![rng.gen_range(0..g.m() as u32)]);
        let reference = bfs_ball(&g, u, 4, &f);
        let b = ball(&g, u, 4, &f, 64);
        if b.truncated {
            assert!(reference.len() > 64);
            assert_eq!(b.members.len(), 64);
        } else {
            let mut got = b.members.clone();
            got.sort_unstable();
            assert_eq!(got, reference);
        }
    }
}

#[test]
fn ball_monotone_in_radius_and_antitone_in_failures() {
    let g = erdos_renyi(36, 0.12, 1, 1, 23);
    let f_small = EdgeSet::from_ids(vec![0]);
    let f_large = EdgeSet::from_ids(vec![0, 1, 2, 3]);
    for u in 0..g.n() as u32 {
        let b2 = bfs_ball(&g, u, 2, &f_small);
        let b3 = bfs_ball(&g, u, 3, &f_small);
        assert!(b2.iter().all(|v| b3.contains(v)));
        let bf = bfs_ball(&g, u, 3, &f_large);
        assert!(bf.iter().all(|v| b3.contains(v)));
    }
}

/// Reference for edge-on-path: climb parents to the root and compare.
fn edge_on_path_by_walking(
    g: &Graph<u64>,
    parent: &[u32],
    x: VertexId,
    y: VertexId,
    e: u32,
) -> bool {
    let root_path = |mut v: VertexId| {
        let mut edges = Vec::new();
        while parent[v as usize] != NO_PARENT {
            edges.push(parent[v as usize]);
            v = g.edge(parent[v as usize]).other(v);
        }
        edges
    };
    let px = root_path(x);
    let py = root_path(y);
    // the x..y tree path is the symmetric difference of the two root paths
    let on_x = px.iter().filter(|id| !py.contains(id));
    let on_y = py.iter().filter(|id| !px.contains(id));
    on_x.chain(on_y).any(|&id| id == e)
}

#[test]
fn lca_on_path_matches_walk_to_root() {
    let g = connected_erdos_renyi(80, 0.06, 1, 4, 41);
    let r = sssp(&g, 0, &EdgeSet::new());
    let idx = LcaIndex::build(&g, &r.parent, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let x = rng.gen_range(0..g.n() as u32);
        let y = rng.gen_range(0..g.n() as u32);
        let e = rng.gen_range(0..g.m() as u32);
        assert_eq!(
            idx.edge_on_path(&g, x, y, e),
            edge_on_path_by_walking(&g, &r.parent, x, y, e),
            "x={x} y={y} e={e}"
        );
    }
}
