//! Cross-module properties of the static oracles.

use num_rational::Ratio;
use odo_core::gen::erdos_renyi;
use odo_core::{sssp, EdgeSet, VertexId};
use odo_oracles::{NearAdditiveDo, PivotMode};

/// The hop-lemma property: when every vertex on the shortest s-t path has
/// its radius-r ball inside its vicinity list (r = (eps/2) d + W), the
/// estimate is exact.
#[test]
fn vicinity_covered_pairs_answer_exactly() {
    let g = erdos_renyi(80, 0.035, 4, 9, 44);
    let eps = Ratio::new(1, 1);
    let k = 24usize;
    let oracle = NearAdditiveDo::build(&g, k, eps, PivotMode::Greedy);
    let w_max = g.max_weight();
    let rows: Vec<_> = (0..g.n() as u32)
        .map(|s| sssp(&g, s, &EdgeSet::new()))
        .collect();
    // ball(v, r) ⊆ K[v] <=> fewer than K vertices lie within distance r,
    // or the K-th closest already exceeds r
    let in_vr = |v: VertexId, r: u64| {
        let row = &rows[v as usize];
        let count = (0..g.n() as u32)
            .filter(|&u| row.dist(u) != u64::MAX && row.dist(u) <= r)
            .count();
        count <= k
    };
    let mut ws = oracle.workspace();
    let mut exact_checked = 0;
    for s in 0..g.n() as u32 {
        for t in 0..g.n() as u32 {
            let d = rows[s as usize].dist(t);
            if d == u64::MAX || s == t {
                continue;
            }
            // r = (eps/2) d + W with eps = 1
            let r = d / 2 + w_max;
            let path = rows[s as usize].path_to(&g, t).unwrap();
            if path.vertices.iter().all(|&v| in_vr(v, r)) {
                let (est, _) = oracle.query_in(&mut ws, s, t);
                assert_eq!(est, d, "covered pair ({s},{t}) not exact");
                exact_checked += 1;
            }
        }
    }
    assert!(exact_checked > 50, "instance exercised too few covered pairs");
}

/// Space of the pivot rows scales inversely with K at fixed n.
#[test]
fn pivot_row_words_halve_when_k_doubles() {
    let g = erdos_renyi(300, 0.05, 1, 8, 21);
    let w8 = NearAdditiveDo::build(&g, 8, Ratio::new(1, 1), PivotMode::Random { seed: 4, c: 1.0 })
        .pivot_row_words();
    let w16 =
        NearAdditiveDo::build(&g, 16, Ratio::new(1, 1), PivotMode::Random { seed: 4, c: 1.0 })
            .pivot_row_words();
    let ratio = w8 as f64 / w16 as f64;
    assert!((1.0..4.0).contains(&ratio), "ratio {ratio}");
}
