//! The general distance sensitivity oracle.
//!
//! Components: a hop-short DSO, pivot sets B1/B2 with per-vertex pivot
//! trees, granular FT-trees between first-type pivots, plain FT-trees from
//! every second-type pivot to every vertex, and per-B2-pivot shortest-path
//! trees with LCA support. A query builds a small complete auxiliary graph
//! on the failure endpoints plus the query pair, weights its edges through
//! the pivot machinery, and answers with the auxiliary-graph distance.

use crate::covering::CoveringStrategy;
use crate::error::DsoConfigError;
use crate::ft_tree::{FtBuildCtx, FtQueryDiag, FtTree};
use crate::pivot_tree::{
    build_pivot_sets, build_pivot_trees, PivotForest, PivotSelectMode, PivotSets, PivotVerdict,
};
use crate::rval::RVal;
use crate::short::{ShortDso, ShortDsoBuild};
use num_rational::Ratio;
use odo_core::{sssp, AllPairs, EdgeSet, Graph, LcaIndex, VertexId};
use odo_oracles::InnerDoSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct GeneralDsoConfig {
    pub f: u32,
    pub l_cut: u32,
    pub eps: Ratio<u64>,
    pub lambda_override: Option<u32>,
    pub mode: PivotSelectMode,
    pub inner: InnerDoSpec,
    pub cover: CoveringStrategy,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GeneralBuildStats {
    pub b1_size: u64,
    pub b2_size: u64,
    pub lambda: u32,
    pub additive_cap: u64,
    pub granular_trees: u64,
    pub plain_trees: u64,
    pub granular_tree_words: u64,
    pub plain_tree_words: u64,
    pub pivot_tree_words: u64,
    pub short_dso_words: u64,
    pub lca_words: u64,
}

/// Coverage diagnostics of one query: when every flag is clear, the
/// deterministic preconditions of the stretch bound held.
#[derive(Debug, Clone, Copy, Default)]
pub struct QueryDiag {
    pub used_dense: bool,
    pub used_sparse: bool,
    pub sparse_incomplete: bool,
    pub missing_part_pivot: bool,
    pub leaf_path_hit_failure: bool,
}

impl QueryDiag {
    pub fn coverage_ok(&self) -> bool {
        !self.sparse_incomplete && !self.missing_part_pivot && !self.leaf_path_hit_failure
    }

    fn absorb_ft(&mut self, d: FtQueryDiag) {
        self.missing_part_pivot |= d.missing_part_pivot;
        self.leaf_path_hit_failure |= d.leaf_path_hit_failure;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneralDso {
    graph: Graph<u64>,
    f: u32,
    l_cut: u32,
    eps: Ratio<u64>,
    alpha: Ratio<u64>,
    beta: u64,
    /// Fixed certification constant: alpha*|P| + additive_cap*beta bounds
    /// d(u,v,F) at every certified FT-tree node.
    additive_cap: u64,
    sets: PivotSets,
    forest: PivotForest,
    short: ShortDso,
    granular: BTreeMap<(VertexId, VertexId), FtTree>,
    plain: BTreeMap<(VertexId, VertexId), FtTree>,
    b2_spt: BTreeMap<VertexId, LcaIndex>,
}

impl GeneralDso {
    pub fn build(g: &Graph<u64>, cfg: &GeneralDsoConfig) -> Result<(Self, GeneralBuildStats), DsoConfigError> {
        let ShortDsoBuild { dso: short, .. } =
            ShortDso::preprocess(g, cfg.l_cut, cfg.f, &cfg.inner, cfg.cover, false)?;
        Self::assemble(g, cfg, short)
    }

    /// Builds around an already-constructed hop-short oracle.
    pub fn assemble(
        g: &Graph<u64>,
        cfg: &GeneralDsoConfig,
        short: ShortDso,
    ) -> Result<(Self, GeneralBuildStats), DsoConfigError> {
        let ap = AllPairs::build(g);
        let mut sets = build_pivot_sets(
            g,
            &ap,
            cfg.l_cut,
            cfg.f,
            cfg.eps,
            cfg.mode,
            cfg.lambda_override,
        )?;
        let forest = build_pivot_trees(g, &mut sets, cfg.l_cut, cfg.f);
        let (alpha, beta) = short.stretch();

        // shortest-path tree plus LCA index for every second-type pivot
        let empty = EdgeSet::new();
        let b2_spt: BTreeMap<VertexId, LcaIndex> = sets
            .b2
            .par_iter()
            .map(|&p| {
                let r = sssp(g, p, &empty);
                (p, LcaIndex::build(g, &r.parent, p))
            })
            .collect();

        let ctx = FtBuildCtx {
            g,
            ap: &ap,
            b2: &sets.b2,
            f: cfg.f,
            l_cut: cfg.l_cut,
            eps: cfg.eps,
        };
        // granular trees for every ordered-min pair of first-type pivots
        let granular_pairs: Vec<(VertexId, VertexId)> = sets
            .b1
            .iter()
            .flat_map(|&a| sets.b1.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| a <= b)
            .collect();
        let granular: BTreeMap<(VertexId, VertexId), FtTree> = granular_pairs
            .par_iter()
            .map(|&(a, b)| ((a, b), ctx.build_tree(a, b, sets.lambda)))
            .collect();
        // plain trees from every second-type pivot to every vertex
        let plain_pairs: Vec<(VertexId, VertexId)> = sets
            .b2
            .iter()
            .flat_map(|&p| (0..g.n() as VertexId).map(move |y| (p, y)))
            .filter(|&(p, y)| p != y)
            .collect();
        let plain: BTreeMap<(VertexId, VertexId), FtTree> = plain_pairs
            .par_iter()
            .map(|&(p, y)| ((p, y), ctx.build_tree(p, y, 0)))
            .collect();

        // the certification constant is the worst oracle-tested part count
        // over every stored expath, fixed before any query
        let additive_cap = granular
            .values()
            .chain(plain.values())
            .map(|t| t.max_short_parts)
            .max()
            .unwrap_or(0);

        // concrete form of the additive-stretch budget:
        // 7 * (additive_cap) * f^2 * beta <= eps * L / 3
        if beta > 0 {
            let lhs = 21u128
                * additive_cap as u128
                * (cfg.f as u128).pow(2)
                * beta as u128
                * *cfg.eps.denom() as u128;
            let rhs = *cfg.eps.numer() as u128 * cfg.l_cut as u128;
            if lhs > rhs {
                return Err(DsoConfigError::BetaConstraint {
                    additive_cap,
                    f: cfg.f,
                    beta,
                    eps: cfg.eps,
                    l_cut: cfg.l_cut,
                });
            }
        }

        let stats = GeneralBuildStats {
            b1_size: sets.b1.len() as u64,
            b2_size: sets.b2.len() as u64,
            lambda: sets.lambda,
            additive_cap,
            granular_trees: granular.len() as u64,
            plain_trees: plain.len() as u64,
            granular_tree_words: granular.values().map(|t| t.space_words()).sum(),
            plain_tree_words: plain.values().map(|t| t.space_words()).sum(),
            pivot_tree_words: forest.space_words(),
            short_dso_words: short.space_words(),
            lca_words: b2_spt.values().map(|l| l.space_words()).sum(),
        };
        Ok((
            GeneralDso {
                graph: g.clone(),
                f: cfg.f,
                l_cut: cfg.l_cut,
                eps: cfg.eps,
                alpha,
                beta,
                additive_cap,
                sets,
                forest,
                short,
                granular,
                plain,
                b2_spt,
            },
            stats,
        ))
    }

    pub fn graph(&self) -> &Graph<u64> {
        &self.graph
    }

    pub fn sensitivity(&self) -> u32 {
        self.f
    }

    pub fn l_cut(&self) -> u32 {
        self.l_cut
    }

    pub fn lambda(&self) -> u32 {
        self.sets.lambda
    }

    pub fn pivot_sets(&self) -> &PivotSets {
        &self.sets
    }

    pub fn short_dso(&self) -> &ShortDso {
        &self.short
    }

    pub fn additive_cap(&self) -> u64 {
        self.additive_cap
    }

    /// Declared stretch of the whole oracle: (alpha * (1 + eps), beta).
    pub fn stretch(&self) -> (Ratio<u64>, u64) {
        (
            self.alpha * (Ratio::from_integer(1) + self.eps),
            self.beta,
        )
    }

    /// Inner hop-short stretch (alpha, beta).
    pub fn inner_stretch(&self) -> (Ratio<u64>, u64) {
        (self.alpha, self.beta)
    }

    pub fn granular_tree(&self, a: VertexId, b: VertexId) -> Option<&FtTree> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.granular.get(&key)
    }

    pub fn plain_tree(&self, p: VertexId, y: VertexId) -> Option<&FtTree> {
        self.plain.get(&(p, y))
    }

    fn ft_granular(&self, a: VertexId, b: VertexId, fail: &EdgeSet, diag: &mut QueryDiag) -> RVal {
        let key = if a <= b { (a, b) } else { (b, a) };
        let tree = self
            .granular
            .get(&key)
            .expect("granular trees cover all B1 x B1 pairs");
        if key.0 == key.1 {
            return RVal::zero();
        }
        let mut fd = FtQueryDiag::default();
        let val = tree.query(
            fail,
            &self.graph,
            &self.short,
            &self.b2_spt,
            self.alpha,
            self.beta,
            self.additive_cap,
            &mut fd,
        );
        diag.absorb_ft(fd);
        val
    }

    fn ft_plain(&self, p: VertexId, y: VertexId, fail: &EdgeSet, diag: &mut QueryDiag) -> RVal {
        if p == y {
            return RVal::zero();
        }
        let tree = self
            .plain
            .get(&(p, y))
            .expect("plain trees cover all B2 x V pairs");
        let mut fd = FtQueryDiag::default();
        let val = tree.query(
            fail,
            &self.graph,
            &self.short,
            &self.b2_spt,
            self.alpha,
            self.beta,
            self.additive_cap,
            &mut fd,
        );
        diag.absorb_ft(fd);
        val
    }

    /// The auxiliary-graph edge weight w_H(u, v) under the failure set.
    pub fn edge_weight(&self, u: VertexId, v: VertexId, fail: &EdgeSet, diag: &mut QueryDiag) -> RVal {
        let (wt, _) = self.edge_weight_inner(u, v, fail, diag);
        wt
    }

    fn edge_weight_inner(
        &self,
        u: VertexId,
        v: VertexId,
        fail: &EdgeSet,
        diag: &mut QueryDiag,
    ) -> (RVal, &'static str) {
        let hop_short = RVal::from_int(self.short.estimate(u, v, fail));
        let lu = self.forest.lookup(u, fail);
        let lv = self.forest.lookup(v, fail);
        match (&lu, &lv) {
            (PivotVerdict::Dense(pu), PivotVerdict::Dense(pv)) => {
                diag.used_dense = true;
                let ft = self
                    .ft_granular(*pu, *pv, fail, diag)
                    .add(RVal::from_int(self.sets.lambda as u64));
                (hop_short.min(ft), "dense")
            }
            _ => {
                diag.used_sparse = true;
                // x is the sparse endpoint (u preferred), y the other
                let (x, y, verdict) = match &lu {
                    PivotVerdict::Sparse { .. } => (u, v, &lu),
                    _ => (v, u, &lv),
                };
                let PivotVerdict::Sparse { members, complete } = verdict else {
                    unreachable!("one side is sparse in the sparse case");
                };
                if !complete {
                    diag.sparse_incomplete = true;
                }
                let mut best = hop_short;
                for &p in members {
                    let through = RVal::from_int(self.short.estimate(x, p, fail))
                        .add(self.ft_plain(p, y, fail, diag));
                    best = best.min(through);
                }
                (best, "sparse")
            }
        }
    }

    /// Replacement-distance estimate for (s, t, F): the s-t distance of the
    /// auxiliary complete graph on V(F) ∪ {s, t}. Never underestimates
    /// d(s,t,F); pairs of `fail` outside E must be stripped by the caller
    /// (see `query_pairs`).
    pub fn query(&self, s: VertexId, t: VertexId, fail: &EdgeSet) -> (RVal, QueryDiag) {
        let mut diag = QueryDiag::default();
        if s == t {
            return (RVal::zero(), diag);
        }
        assert!(
            fail.len() <= self.f as usize,
            "failure set exceeds sensitivity"
        );
        let mut verts: Vec<VertexId> = vec![s, t];
        for e in fail.iter() {
            let edge = self.graph.edge(e);
            verts.push(edge.u);
            verts.push(edge.v);
        }
        verts.sort_unstable();
        verts.dedup();
        let k = verts.len();
        let mut w = vec![RVal::INFINITY; k * k];
        for i in 0..k {
            for j in i + 1..k {
                let wt = self.edge_weight(verts[i], verts[j], fail, &mut diag);
                w[i * k + j] = wt;
                w[j * k + i] = wt;
            }
        }
        // Dijkstra on the small complete graph H
        let src = verts.binary_search(&s).unwrap();
        let dst = verts.binary_search(&t).unwrap();
        let mut dist = vec![RVal::INFINITY; k];
        let mut done = vec![false; k];
        dist[src] = RVal::zero();
        for _ in 0..k {
            let mut cur = None;
            for i in 0..k {
                if !done[i] && dist[i] < RVal::INFINITY {
                    if cur.is_none_or(|c: usize| dist[i] < dist[c]) {
                        cur = Some(i);
                    }
                }
            }
            let Some(cur) = cur else { break };
            done[cur] = true;
            if cur == dst {
                break;
            }
            for j in 0..k {
                if !done[j] {
                    let cand = dist[cur].add(w[cur * k + j]);
                    if cand < dist[j] {
                        dist[j] = cand;
                    }
                }
            }
        }
        (dist[dst], diag)
    }

    /// Query with raw vertex pairs; pairs outside E are ignored, i.e. the
    /// query is answered for F ∩ E.
    pub fn query_pairs(
        &self,
        s: VertexId,
        t: VertexId,
        pairs: &[(VertexId, VertexId)],
    ) -> (RVal, QueryDiag) {
        let fail = EdgeSet::from_pairs(&self.graph, pairs);
        self.query(s, t, &fail)
    }

    pub fn space_words(&self) -> u64 {
        self.short.space_words()
            + self.forest.space_words()
            + self.granular.values().map(|t| t.space_words()).sum::<u64>()
            + self.plain.values().map(|t| t.space_words()).sum::<u64>()
            + self.b2_spt.values().map(|l| l.space_words()).sum::<u64>()
            + self.sets.b1.len() as u64
            + self.sets.b2.len() as u64
    }
}
