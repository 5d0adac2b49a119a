//! Pivot sets and per-vertex pivot trees.
//!
//! Pivots of the first type (B1) anchor the granular FT-trees; pivots of the
//! second type (B2) serve sparse neighborhoods and long path parts. A pivot
//! tree per vertex answers, for any failure set F, either the closest B1
//! pivot within lambda/2 hops in G-F or a superset of the B2 pivots in that
//! ball.

use crate::error::DsoConfigError;
use num_rational::Ratio;
use odo_core::derand::{collect_long_paths, derand_b1_phase, greedy_hitting_set, BallRecord};
use odo_core::{ball, AllPairs, EdgeId, EdgeSet, Graph, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PivotSelectMode {
    Random {
        seed: u64,
        c1: f64,
        c2: f64,
    },
    /// B2 from a greedy hitting set of all long canonical shortest paths;
    /// B1 from hitting-set phases interleaved with the tree construction.
    Derandomized,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PivotSets {
    pub b1: Vec<VertexId>,
    pub b2: Vec<VertexId>,
    pub lambda: u32,
    pub mode: PivotSelectMode,
}

/// lambda = floor(eps * L / 9) rounded down to even.
pub fn default_lambda(eps: Ratio<u64>, l_cut: u32) -> u32 {
    let raw = (eps.numer() * l_cut as u64) / (9 * eps.denom());
    (raw - raw % 2) as u32
}

/// Validates parameters and selects B2 (and, in random mode, B1). In
/// derandomized mode B1 stays empty until the pivot trees are built.
pub fn build_pivot_sets(
    g: &Graph<u64>,
    ap: &AllPairs<u64>,
    l_cut: u32,
    f: u32,
    eps: Ratio<u64>,
    mode: PivotSelectMode,
    lambda_override: Option<u32>,
) -> Result<PivotSets, DsoConfigError> {
    if g.is_weighted() {
        return Err(DsoConfigError::WeightedGraph);
    }
    if !(2 <= f && f <= l_cut && (l_cut as usize) <= g.n()) {
        return Err(DsoConfigError::ParameterOrder {
            f,
            l_cut,
            n: g.n(),
        });
    }
    if eps > Ratio::new(12, 7) {
        return Err(DsoConfigError::EpsilonTooLarge(eps));
    }
    let lambda = lambda_override.unwrap_or_else(|| default_lambda(eps, l_cut));
    if lambda < 2 || lambda % 2 != 0 {
        return Err(DsoConfigError::LambdaTooSmall(lambda));
    }
    if lambda > l_cut {
        return Err(DsoConfigError::LambdaExceedsCutoff { lambda, l_cut });
    }
    let (b1, b2) = match mode {
        PivotSelectMode::Random { seed, c1, c2 } => {
            let n = g.n().max(2) as f64;
            let lf = (l_cut as f64).powi(f as i32);
            let p1 = (c1 * f as f64 * n.log2() / lf).min(1.0);
            let p2 = (c2 * f as f64 * n.log2() / lambda as f64).min(1.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b1 = (0..g.n() as VertexId)
                .filter(|_| rng.gen_bool(p1))
                .collect();
            let b2 = (0..g.n() as VertexId)
                .filter(|_| rng.gen_bool(p2))
                .collect();
            (b1, b2)
        }
        PivotSelectMode::Derandomized => {
            let threshold = (lambda as u64).div_ceil(4 * f as u64 + 2).max(1) as u32;
            let sys = collect_long_paths(g, ap, threshold);
            let b2 = if sys.is_empty() {
                Vec::new()
            } else {
                greedy_hitting_set(&sys)
            };
            (Vec::new(), b2)
        }
    };
    Ok(PivotSets {
        b1,
        b2,
        lambda,
        mode,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PivotNode {
    Dense {
        /// BFS-tree path from the tree's owner to the selected pivot.
        path: Vec<VertexId>,
        path_edges: Vec<EdgeId>,
        pivot: VertexId,
        /// (failed edge on `path`, child index), one per path edge.
        children: Vec<(EdgeId, u32)>,
    },
    Sparse {
        b2_members: Vec<VertexId>,
        /// False when the ball search was cut off before exhausting the ball
        /// without a pivot being available (a coverage miss in random mode).
        complete: bool,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PivotTree {
    pub nodes: Vec<PivotNode>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PivotForest {
    pub lambda: u32,
    pub cap: usize,
    trees: Vec<PivotTree>,
}

/// Verdict of a pivot lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PivotVerdict {
    Dense(VertexId),
    Sparse { members: Vec<VertexId>, complete: bool },
}

/// Builds the per-vertex pivot trees level by level. In derandomized mode,
/// each level's qualifying balls feed a hitting-set phase whose output joins
/// B1 before the level's nodes are fixed.
pub fn build_pivot_trees(g: &Graph<u64>, sets: &mut PivotSets, l_cut: u32, f: u32) -> PivotForest {
    let lambda = sets.lambda;
    // ball searches stop at L^f visited vertices (dense = more than that)
    let cap = (l_cut as usize)
        .checked_pow(f)
        .unwrap_or(usize::MAX)
        .max(1);
    let mut trees: Vec<PivotTree> = (0..g.n()).map(|_| PivotTree { nodes: Vec::new() }).collect();
    // pending node work items: (owner vertex, node index, accumulated failures)
    let mut pending: Vec<(VertexId, u32, EdgeSet)> = (0..g.n() as VertexId)
        .map(|u| {
            trees[u as usize].nodes.push(PivotNode::Sparse {
                b2_members: Vec::new(),
                complete: true,
            });
            (u, 0, EdgeSet::new())
        })
        .collect();
    let derand = matches!(sets.mode, PivotSelectMode::Derandomized);

    for level in 0..=f {
        let balls: Vec<odo_core::Ball> = pending
            .iter()
            .map(|(u, _, fail)| ball(g, *u, lambda / 2, fail, cap))
            .collect();
        if derand {
            let records: Vec<BallRecord> = balls
                .iter()
                .map(|b| BallRecord {
                    members: b.members.clone(),
                    truncated: b.truncated,
                    b2_intersection: b
                        .members
                        .iter()
                        .filter(|v| sets.b2.binary_search(v).is_ok())
                        .count(),
                })
                .collect();
            let phase = derand_b1_phase(g.n(), &records, f, cap, lambda);
            sets.b1.extend(phase);
            sets.b1.sort_unstable();
            sets.b1.dedup();
        }
        let mut next = Vec::new();
        for ((u, node_idx, fail), b) in pending.iter().zip(&balls) {
            let verdict = if derand {
                let b2_count = b
                    .members
                    .iter()
                    .filter(|v| sets.b2.binary_search(v).is_ok())
                    .count();
                let qualifies = b.truncated
                    || (b2_count as u128) * (lambda.max(1) as u128)
                        > (f as u128) * (cap as u128);
                if qualifies {
                    let pivot = b
                        .members
                        .iter()
                        .copied()
                        .find(|v| sets.b1.binary_search(v).is_ok())
                        .expect("phase hitting set covers every qualifying ball");
                    Some(pivot)
                } else {
                    None
                }
            } else {
                b.members
                    .iter()
                    .copied()
                    .find(|v| sets.b1.binary_search(v).is_ok())
            };
            match verdict {
                Some(pivot) => {
                    let path = b.path_to(g, pivot).expect("pivot was visited").vertices;
                    let path_edges = g.path_edge_ids(&path).expect("BFS tree path");
                    let mut children = Vec::new();
                    if level < f {
                        for &e in &path_edges {
                            let child_idx = trees[*u as usize].nodes.len() as u32;
                            trees[*u as usize].nodes.push(PivotNode::Sparse {
                                b2_members: Vec::new(),
                                complete: true,
                            });
                            children.push((e, child_idx));
                            next.push((*u, child_idx, fail.with(e)));
                        }
                    }
                    trees[*u as usize].nodes[*node_idx as usize] = PivotNode::Dense {
                        path,
                        path_edges,
                        pivot,
                        children,
                    };
                }
                None => {
                    let members: Vec<VertexId> = b
                        .members
                        .iter()
                        .copied()
                        .filter(|v| sets.b2.binary_search(v).is_ok())
                        .collect();
                    trees[*u as usize].nodes[*node_idx as usize] = PivotNode::Sparse {
                        b2_members: members,
                        complete: !b.truncated,
                    };
                }
            }
        }
        pending = next;
        if pending.is_empty() {
            break;
        }
    }
    PivotForest { lambda, cap, trees }
}

impl PivotForest {
    /// Descends the pivot tree of `u` along failed edges: either the stored
    /// path to a B1 pivot survives F (the pivot then lies within lambda/2
    /// hops of u in G-F), or a leaf yields a superset of the B2 pivots in
    /// ball(u, lambda/2) of G-F.
    pub fn lookup(&self, u: VertexId, fail: &EdgeSet) -> PivotVerdict {
        let tree = &self.trees[u as usize];
        let mut idx = 0u32;
        loop {
            match &tree.nodes[idx as usize] {
                PivotNode::Sparse {
                    b2_members,
                    complete,
                } => {
                    return PivotVerdict::Sparse {
                        members: b2_members.clone(),
                        complete: *complete,
                    };
                }
                PivotNode::Dense {
                    path_edges,
                    pivot,
                    children,
                    ..
                } => {
                    let failed = path_edges
                        .iter()
                        .copied()
                        .filter(|e| fail.contains(*e))
                        .min();
                    match failed {
                        None => return PivotVerdict::Dense(*pivot),
                        Some(e) => {
                            idx = children
                                .iter()
                                .find(|&&(edge, _)| edge == e)
                                .map(|&(_, c)| c)
                                .expect("depth-f dense nodes cannot see new failures");
                        }
                    }
                }
            }
        }
    }

    pub fn tree(&self, u: VertexId) -> &PivotTree {
        &self.trees[u as usize]
    }

    pub fn space_words(&self) -> u64 {
        self.trees
            .iter()
            .map(|t| {
                t.nodes
                    .iter()
                    .map(|n| match n {
                        PivotNode::Dense {
                            path,
                            path_edges,
                            children,
                            ..
                        } => (path.len() + path_edges.len() + 2 * children.len() + 1) as u64,
                        PivotNode::Sparse { b2_members, .. } => b2_members.len() as u64 + 1,
                    })
                    .sum::<u64>()
            })
            .sum()
    }
}
