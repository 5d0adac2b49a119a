//! Fault tolerance for hop-short replacement paths.
//!
//! Preprocessing builds fault-tolerant trees level by level only to derive,
//! per level, a covering family of subgraph oracles; the trees themselves
//! are discarded. A query emulates the root-to-leaf traversal of the
//! discarded tree: at each step the representative oracle of the accumulated
//! failure set reproduces exactly the path the tree node stored, so the
//! emulated walk and the real one coincide.
//!
//! Requires an unweighted host graph (path length equals hop count).

use crate::covering::{CoveringFamily, CoveringStrategy, HitMissRecord};
use num_rational::Ratio;
use odo_core::{hop_bounded_sssp, EdgeSet, Graph, Path, VertexId};
use odo_oracles::InnerDoSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ShortDsoError {
    #[error("host graph must be unweighted")]
    WeightedGraph,
    #[error("failure set has {0} edges, sensitivity is {1}")]
    TooManyFailures(usize, u32),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShortDso {
    graph: Graph<u64>,
    l_cut: u32,
    f: u32,
    alpha: Ratio<u64>,
    beta: u64,
    families: Vec<CoveringFamily>,
}

/// Per-level build statistics.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ShortBuildStats {
    pub nodes_per_level: Vec<u64>,
    pub records_per_level: Vec<u64>,
    pub family_sizes: Vec<u64>,
    pub patched_per_level: Vec<u64>,
}

/// A retained fault-tolerant tree, kept only by reference builds that verify
/// the emulation.
#[derive(Debug, Clone)]
pub struct RetainedTree {
    pub nodes: Vec<RetainedNode>,
}

#[derive(Debug, Clone)]
pub struct RetainedNode {
    pub fail: EdgeSet,
    pub path: Option<Path<u64>>,
    pub children: Vec<(u32, u32)>, // (failed edge, child node index)
}

#[derive(Debug, Clone, Default)]
pub struct RetainedTrees {
    pub trees: BTreeMap<(VertexId, VertexId), RetainedTree>,
}

struct LevelNode {
    s: VertexId,
    t: VertexId,
    fail: EdgeSet,
    /// index of this node in its retained tree (reference builds only)
    retained_idx: u32,
}

pub struct ShortDsoBuild {
    pub dso: ShortDso,
    pub stats: ShortBuildStats,
    pub retained: Option<RetainedTrees>,
}

impl ShortDso {
    /// Alg.-style preprocessing: levels 0..=f of all FT-trees, one covering
    /// family per level.
    pub fn preprocess(
        g: &Graph<u64>,
        l_cut: u32,
        f: u32,
        inner: &InnerDoSpec,
        cover: CoveringStrategy,
        retain_trees: bool,
    ) -> Result<ShortDsoBuild, ShortDsoError> {
        if g.is_weighted() {
            return Err(ShortDsoError::WeightedGraph);
        }
        let (alpha, beta) = inner.stretch_for(g.max_weight().max(1));
        assert!(alpha >= Ratio::from_integer(1), "inner alpha must be >= 1");
        let mut stats = ShortBuildStats::default();
        let mut retained = retain_trees.then(RetainedTrees::default);
        let mut families: Vec<CoveringFamily> = Vec::with_capacity(f as usize + 1);

        // level-0 nodes: the root of FT(s,t) for every unordered pair
        let mut nodes: Vec<LevelNode> = Vec::new();
        for s in 0..g.n() as VertexId {
            for t in s + 1..g.n() as VertexId {
                if let Some(r) = &mut retained {
                    r.trees.insert(
                        (s, t),
                        RetainedTree {
                            nodes: vec![RetainedNode {
                                fail: EdgeSet::new(),
                                path: None,
                                children: Vec::new(),
                            }],
                        },
                    );
                }
                nodes.push(LevelNode {
                    s,
                    t,
                    fail: EdgeSet::new(),
                    retained_idx: 0,
                });
            }
        }

        for level in 0..=f {
            stats.nodes_per_level.push(nodes.len() as u64);
            // stage 1: exact hop-bounded paths and hit-and-miss records
            let exact_paths: Vec<Option<Path<u64>>> = nodes
                .par_iter()
                .map(|node| {
                    let hb = hop_bounded_sssp(g, node.s, l_cut, &node.fail);
                    hb.path_to(g, node.t)
                })
                .collect();
            let records: Vec<HitMissRecord> = nodes
                .iter()
                .zip(&exact_paths)
                .filter_map(|(node, p)| {
                    p.as_ref().map(|p| {
                        debug_assert!(p.hops() as u32 <= l_cut);
                        HitMissRecord::new(
                            node.fail.clone(),
                            g.path_edge_ids(&p.vertices).expect("path lives in g"),
                        )
                    })
                })
                .collect();
            stats.records_per_level.push(records.len() as u64);

            // stage 2: covering family for this level, then replace each
            // node's path with the representative oracle's answer
            let family = CoveringFamily::build(g, &records, l_cut, level, cover, inner);
            family
                .verify_coverage(&records)
                .expect("covering certificate must hold");
            stats.family_sizes.push(family.len() as u64);
            stats.patched_per_level.push(family.patched_members as u64);

            // every node stores the representative's path under the same
            // feasibility rule the query applies, so the emulated traversal
            // reproduces the build exactly; the exact path only decided
            // whether the node contributed a hit-and-miss record
            let stored: Vec<Option<Path<u64>>> = nodes
                .par_iter()
                .map(|node| {
                    let (rep, _) = family.select_representative(&node.fail, node.s, node.t);
                    let path = rep.and_then(|id| family.member(id).oracle.path(node.s, node.t).1);
                    path.filter(|p| hops_within_cap(p.hops() as u64, alpha, l_cut, beta))
                })
                .collect();

            if let Some(r) = &mut retained {
                for (node, path) in nodes.iter().zip(&stored) {
                    let tree = r.trees.get_mut(&(node.s, node.t)).unwrap();
                    tree.nodes[node.retained_idx as usize].path = path.clone();
                }
            }

            // expand to the next level: one child per stored-path edge
            if level < f {
                let mut next: Vec<LevelNode> = Vec::new();
                for (node, path) in nodes.iter().zip(&stored) {
                    let Some(path) = path else { continue };
                    let mut edge_ids = g.path_edge_ids(&path.vertices).expect("path lives in g");
                    edge_ids.sort_unstable();
                    edge_ids.dedup();
                    for e in edge_ids {
                        debug_assert!(!node.fail.contains(e));
                        let child_fail = node.fail.with(e);
                        let retained_idx = if let Some(r) = &mut retained {
                            let tree = r.trees.get_mut(&(node.s, node.t)).unwrap();
                            let idx = tree.nodes.len() as u32;
                            tree.nodes.push(RetainedNode {
                                fail: child_fail.clone(),
                                path: None,
                                children: Vec::new(),
                            });
                            tree.nodes[node.retained_idx as usize]
                                .children
                                .push((e, idx));
                            idx
                        } else {
                            0
                        };
                        next.push(LevelNode {
                            s: node.s,
                            t: node.t,
                            fail: child_fail,
                            retained_idx,
                        });
                    }
                }
                nodes = next;
            }
            families.push(family);
        }

        Ok(ShortDsoBuild {
            dso: ShortDso {
                graph: g.clone(),
                l_cut,
                f,
                alpha,
                beta,
                families,
            },
            stats,
            retained,
        })
    }

    pub fn graph(&self) -> &Graph<u64> {
        &self.graph
    }

    pub fn l_cut(&self) -> u32 {
        self.l_cut
    }

    pub fn sensitivity(&self) -> u32 {
        self.f
    }

    pub fn stretch(&self) -> (Ratio<u64>, u64) {
        (self.alpha, self.beta)
    }

    pub fn family(&self, level: u32) -> &CoveringFamily {
        &self.families[level as usize]
    }

    /// Alg.-style query: emulate the root-to-leaf traversal of FT(s, t).
    /// Returns a path in G-F with at most alpha*L+beta edges and length in
    /// [d(s,t,F), alpha*d(s,t,F)+beta] whenever d(s,t,F) <= L; `None` only
    /// when no hop-short replacement path exists. The emulation always runs
    /// in the canonical (min, max) orientation the trees were built with.
    pub fn query(
        &self,
        s: VertexId,
        t: VertexId,
        fail: &EdgeSet,
    ) -> Result<Option<Path<u64>>, ShortDsoError> {
        if fail.len() > self.f as usize {
            return Err(ShortDsoError::TooManyFailures(fail.len(), self.f));
        }
        if s == t {
            return Ok(Some(Path::single(s)));
        }
        let (a, b) = if s < t { (s, t) } else { (t, s) };
        let mut fx = EdgeSet::new();
        for level in 0..=self.f {
            let (rep, _) = self.families[level as usize].select_representative(&fx, a, b);
            let path = rep.and_then(|id| {
                self.families[level as usize]
                    .member(id)
                    .oracle
                    .path(a, b)
                    .1
            });
            let Some(path) = path else {
                return Ok(None); // not-exist
            };
            if !hops_within_cap(path.hops() as u64, self.alpha, self.l_cut, self.beta) {
                return Ok(None); // not-exist
            }
            match path.first_failed_edge(&self.graph, fail) {
                None => {
                    let mut found = path;
                    if s > t {
                        found.vertices.reverse();
                    }
                    return Ok(Some(found)); // found
                }
                Some(e) => {
                    debug_assert!(!fx.contains(e));
                    fx.insert(e);
                }
            }
        }
        unreachable!("traversal adds a new failed edge per level, |F| <= f")
    }

    /// Distance-only wrapper: the reported path length, or infinity on ⊥.
    pub fn estimate(&self, s: VertexId, t: VertexId, fail: &EdgeSet) -> u64 {
        match self.query(s, t, fail) {
            Ok(Some(p)) => p.length,
            _ => u64::MAX,
        }
    }

    /// Queries with raw vertex pairs: pairs outside E are ignored, i.e. the
    /// answer is for F ∩ E.
    pub fn query_pairs(
        &self,
        s: VertexId,
        t: VertexId,
        pairs: &[(VertexId, VertexId)],
    ) -> Result<Option<Path<u64>>, ShortDsoError> {
        let fail = EdgeSet::from_pairs(&self.graph, pairs);
        self.query(s, t, &fail)
    }

    pub fn space_words(&self) -> u64 {
        self.families.iter().map(|f| f.space_words()).sum()
    }
}

/// Exactly the feasibility test |P| <= alpha * L + beta, evaluated without
/// rounding: hops * den <= num * L + beta * den.
pub fn hops_within_cap(hops: u64, alpha: Ratio<u64>, l_cut: u32, beta: u64) -> bool {
    let den = *alpha.denom() as u128;
    let num = *alpha.numer() as u128;
    (hops as u128) * den <= num * l_cut as u128 + beta as u128 * den
}

impl RetainedTrees {
    /// Reference query: the real traversal over the retained tree.
    pub fn query(
        &self,
        g: &Graph<u64>,
        alpha: Ratio<u64>,
        beta: u64,
        l_cut: u32,
        s: VertexId,
        t: VertexId,
        fail: &EdgeSet,
    ) -> Option<Path<u64>> {
        if s == t {
            return Some(Path::single(s));
        }
        let key = if s < t { (s, t) } else { (t, s) };
        let tree = self.trees.get(&key)?;
        let mut idx = 0u32;
        loop {
            let node = &tree.nodes[idx as usize];
            let path = node.path.as_ref()?;
            if !hops_within_cap(path.hops() as u64, alpha, l_cut, beta) {
                return None;
            }
            let oriented = if s < t {
                path.clone()
            } else {
                let mut p = path.clone();
                p.vertices.reverse();
                p
            };
            match oriented.first_failed_edge(g, fail) {
                None => return Some(oriented),
                Some(e) => {
                    idx = node
                        .children
                        .iter()
                        .find(|&&(edge, _)| edge == e)
                        .map(|&(_, child)| child)?;
                }
            }
        }
    }
}
