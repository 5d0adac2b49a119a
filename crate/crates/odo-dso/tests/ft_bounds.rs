//! Direct audits of the FT-tree value contracts: never-underestimate on
//! random probes, and the upper bounds against the far-away decomposable
//! distance (the dense-case inequality deliberately mixes pivot endpoints on
//! the left with the original endpoints on the right).

use num_rational::Ratio;
use odo_core::gen::connected_erdos_renyi;
use odo_core::{ball, AllPairs, EdgeSet, Graph, VertexId};
use odo_dso::{CoveringStrategy, GeneralDso, GeneralDsoConfig, PivotSelectMode, RVal};
use odo_oracles::InnerDoSpec;
use odo_verify::exact_replacement_distance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn build(n: usize, seed: u64, mode: PivotSelectMode) -> (Graph<u64>, GeneralDso) {
    let g = connected_erdos_renyi(n, 0.15, 1, 1, seed);
    let cfg = GeneralDsoConfig {
        f: 2,
        l_cut: 6,
        eps: Ratio::new(1, 1),
        lambda_override: Some(2),
        mode,
        inner: InnerDoSpec::Exact,
        cover: CoveringStrategy::Sampled { seed: 3, blowup: 1 },
    };
    let (dso, _) = GeneralDso::build(&g, &cfg).unwrap();
    (g, dso)
}

fn b2_spt(dso: &GeneralDso) -> std::collections::BTreeMap<VertexId, odo_core::LcaIndex> {
    let g = dso.graph();
    dso.pivot_sets()
        .b2
        .iter()
        .map(|&p| {
            let r = odo_core::sssp(g, p, &EdgeSet::new());
            (p, odo_core::LcaIndex::build(g, &r.parent, p))
        })
        .collect()
}

#[test]
fn ft_values_never_underestimate() {
    let (g, dso) = build(24, 71, PivotSelectMode::Derandomized);
    let spt = b2_spt(&dso);
    let (alpha, beta) = dso.inner_stretch();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b2 = dso.pivot_sets().b2.clone();
    let mut probes = 0;
    while probes < 500 {
        let p = b2[rng.gen_range(0..b2.len())];
        let y = rng.gen_range(0..g.n() as u32);
        if p == y {
            continue;
        }
        let ids: Vec<u32> = (0..rng.gen_range(0..=2))
            .map(|_| rng.gen_range(0..g.m() as u32))
            .collect();
        let fail = EdgeSet::from_ids(ids);
        let Some(tree) = dso.plain_tree(p, y) else { continue };
        probes += 1;
        let mut diag = odo_dso::FtQueryDiag::default();
        let val = tree.query(
            &fail,
            &g,
            dso.short_dso(),
            &spt,
            alpha,
            beta,
            dso.additive_cap(),
            &mut diag,
        );
        let exact = exact_replacement_distance(&g, p, y, &fail);
        if exact == u64::MAX {
            continue;
        }
        assert!(
            val >= RVal::from_int(exact),
            "FT_0({p},{y},{fail:?}) = {val:?} < exact {exact}"
        );
    }
}

/// Far-away (2f+1)-decomposable distance by bounded waypoint search.
fn far_away_decomposable_dist(
    g: &Graph<u64>,
    ap: &AllPairs<u64>,
    fail: &EdgeSet,
    u: VertexId,
    v: VertexId,
    ell: u32,
    eps: Ratio<u64>,
) -> u64 {
    let removed = odo_core::EdgeMask::from_edge_set(g.m(), fail);
    let mut best = u64::MAX;
    let mut stack: Vec<(VertexId, u32, u64, Vec<VertexId>)> = vec![(u, 0, 0, vec![u])];
    while let Some((cur, frags, len, verts)) = stack.pop() {
        if len.saturating_add(ap.dist(cur, v)) >= best {
            continue;
        }
        if cur == v && verts.len() > 1 && odo_verify::far_away(g, fail, &verts, eps) && len < best
        {
            best = len;
        }
        if frags == ell + 1 {
            continue;
        }
        for y in 0..g.n() as VertexId {
            if y == cur || ap.dist(cur, y) == u64::MAX || !ap.path_avoids(g, cur, y, &removed) {
                continue;
            }
            let step = ap.dist(cur, y);
            if len + step >= best {
                continue;
            }
            let frag = ap.path(g, cur, y).unwrap();
            let mut next = verts.clone();
            next.extend(frag.vertices.iter().skip(1));
            stack.push((y, frags + 1, len + step, next));
        }
    }
    best
}

#[test]
fn ft_plain_upper_bound_against_far_away_distance() {
    let (g, dso) = build(14, 73, PivotSelectMode::Derandomized);
    let spt = b2_spt(&dso);
    let ap = AllPairs::build(&g);
    let (alpha, beta) = dso.inner_stretch();
    let eps = Ratio::new(1, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let b2 = dso.pivot_sets().b2.clone();
    let mut checked = 0;
    for _ in 0..120 {
        let p = b2[rng.gen_range(0..b2.len())];
        let y = rng.gen_range(0..g.n() as u32);
        if p == y {
            continue;
        }
        let ids: Vec<u32> = (1..=rng.gen_range(1..=2))
            .map(|_| rng.gen_range(0..g.m() as u32))
            .collect();
        let fail = EdgeSet::from_ids(ids);
        let d_far = far_away_decomposable_dist(&g, &ap, &fail, p, y, 5, eps);
        if d_far == u64::MAX {
            continue;
        }
        let Some(tree) = dso.plain_tree(p, y) else { continue };
        let mut diag = odo_dso::FtQueryDiag::default();
        let val = tree.query(
            &fail,
            &g,
            dso.short_dso(),
            &spt,
            alpha,
            beta,
            dso.additive_cap(),
            &mut diag,
        );
        checked += 1;
        // FT_0(u,v,F) <= alpha * d_far + cap * beta
        let bound = RVal::from_ratio(
            alpha * Ratio::from_integer(d_far)
                + Ratio::from_integer(dso.additive_cap() * beta),
        );
        assert!(
            val <= bound,
            "FT_0({p},{y},{fail:?}) = {val:?} > bound {bound:?} (d_far {d_far})"
        );
    }
    assert!(checked > 25, "too few checked probes: {checked}");
}

#[test]
fn ft_granular_mixed_inequality() {
    // dense case: left side queries the pivots' tree, right side uses the
    // original endpoints
    let (g, dso) = build(
        14,
        79,
        PivotSelectMode::Random {
            seed: 11,
            c1: 1.5,
            c2: 1.0,
        },
    );
    assert!(
        !dso.pivot_sets().b1.is_empty(),
        "instance needs first-type pivots"
    );
    let spt = b2_spt(&dso);
    let ap = AllPairs::build(&g);
    let (alpha, beta) = dso.inner_stretch();
    let eps = Ratio::new(1, 1);
    let lambda = dso.lambda();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checked = 0;
    for _ in 0..150 {
        let u = rng.gen_range(0..g.n() as u32);
        let v = rng.gen_range(0..g.n() as u32);
        if u == v {
            continue;
        }
        let ids: Vec<u32> = (1..=rng.gen_range(1..=2))
            .map(|_| rng.gen_range(0..g.m() as u32))
            .collect();
        let fail = EdgeSet::from_ids(ids);
        // pivots of the first type within lambda/2 hops in G - F
        let ball_u = ball(&g, u, lambda / 2, &fail, usize::MAX);
        let ball_v = ball(&g, v, lambda / 2, &fail, usize::MAX);
        let b1 = &dso.pivot_sets().b1;
        let pu = ball_u.members.iter().copied().find(|w| b1.binary_search(w).is_ok());
        let pv = ball_v.members.iter().copied().find(|w| b1.binary_search(w).is_ok());
        let (Some(pu), Some(pv)) = (pu, pv) else { continue };
        let d_far = far_away_decomposable_dist(&g, &ap, &fail, u, v, 5, eps);
        if d_far == u64::MAX {
            continue;
        }
        let Some(tree) = dso.granular_tree(pu, pv) else { continue };
        if pu == pv {
            continue;
        }
        let mut diag = odo_dso::FtQueryDiag::default();
        let val = tree
            .query(
                &fail,
                &g,
                dso.short_dso(),
                &spt,
                alpha,
                beta,
                dso.additive_cap(),
                &mut diag,
            )
            .add(RVal::from_int(lambda as u64));
        if diag.missing_part_pivot || diag.leaf_path_hit_failure {
            continue; // random-mode coverage miss
        }
        checked += 1;
        // FT_lambda(pu,pv,F) + lambda <= alpha*d_far + (alpha+1)*lambda + cap*beta:
        // the certified value is bounded by alpha*|Q| with |Q| <= d_far + lambda
        // (one half-lambda pivot leg per side), and the lambda added on the
        // left has no counterpart to cancel against
        let bound = RVal::from_ratio(
            alpha * Ratio::from_integer(d_far)
                + (alpha + Ratio::from_integer(1)) * Ratio::from_integer(lambda as u64)
                + Ratio::from_integer(dso.additive_cap() * beta),
        );
        assert!(
            val <= bound,
            "FT_l({pu},{pv},{fail:?})+l = {val:?} > bound {bound:?} (d_far({u},{v}) = {d_far})"
        );
    }
    assert!(checked > 5, "too few dense probes: {checked}");
}
