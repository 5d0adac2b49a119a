//! Per-level subgraph families that hit-and-miss fault-tolerant tree nodes.
//!
//! A family member is a spanning subgraph given by its removed-edge set,
//! paired with a path-reporting oracle built on that subgraph. A member
//! covers a record (P', F) when it excludes all of F and contains all of P'.
//! Coverage is a certified post-condition, never a probabilistic claim: the
//! sampled strategy verifies every record and patches any uncovered one with
//! a bespoke subgraph removing exactly its failure set.

use odo_core::{EdgeId, EdgeMask, EdgeSet, Graph, VertexId};
use odo_oracles::{InnerDo, InnerDoSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One (P'_x, F_x) pair collected from a level-i FT-tree node.
#[derive(Debug, Clone)]
pub struct HitMissRecord {
    pub fail: EdgeSet,
    pub path_edges: Vec<EdgeId>,
}

impl HitMissRecord {
    pub fn new(fail: EdgeSet, path_edges: Vec<EdgeId>) -> Self {
        debug_assert!(path_edges.iter().all(|e| !fail.contains(*e)));
        HitMissRecord { fail, path_edges }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoveringStrategy {
    /// Random subgraphs (each edge removed with probability 1/L) verified
    /// against every record, with deterministic patch-up of the misses.
    Sampled { seed: u64, blowup: u32 },
    /// One subgraph per distinct failure set; exact but only viable when the
    /// record count is small.
    Exhaustive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverMember {
    pub removed: EdgeSet,
    pub oracle: InnerDo<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoveringFamily {
    level: u32,
    members: Vec<CoverMember>,
    /// edge id -> ascending member ids whose removed set contains the edge.
    edge_index: Vec<Vec<u32>>,
    /// How many sampled members survived dedup vs. patched-in ones.
    pub sampled_members: u32,
    pub patched_members: u32,
}

impl CoveringFamily {
    /// Builds the level-`level` family covering `records`. For level 0 the
    /// family is the host graph alone.
    pub fn build(
        g: &Graph<u64>,
        records: &[HitMissRecord],
        l_cut: u32,
        level: u32,
        strategy: CoveringStrategy,
        spec: &InnerDoSpec,
    ) -> Self {
        let mut removed_sets: Vec<EdgeSet> = Vec::new();
        let mut sampled_members = 0u32;
        if level == 0 {
            removed_sets.push(EdgeSet::new());
        } else {
            match strategy {
                CoveringStrategy::Sampled { seed, blowup } => {
                    let n = g.n().max(2) as f64;
                    let count = (std::f64::consts::E
                        * (l_cut as f64).powi(level as i32)
                        * (level as f64 * (l_cut as f64).ln() + 2.0 * n.ln()))
                    .ceil() as u64
                        * blowup.max(1) as u64;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ level as u64);
                    let p = 1.0 / l_cut as f64;
                    for _ in 0..count {
                        let ids: Vec<EdgeId> = (0..g.m() as EdgeId)
                            .filter(|_| rng.gen_bool(p))
                            .collect();
                        removed_sets.push(EdgeSet::from_ids(ids));
                    }
                }
                CoveringStrategy::Exhaustive => {
                    for r in records {
                        removed_sets.push(r.fail.clone());
                    }
                }
            }
        }
        dedup_keep_order(&mut removed_sets);
        sampled_members += removed_sets.len() as u32;

        // patch-up: every record must be covered; a bespoke subgraph that
        // removes exactly F_x always covers its record
        let mut patched = Vec::new();
        for r in records {
            let covered = removed_sets
                .iter()
                .chain(patched.iter())
                .any(|rem| covers(rem, r));
            if !covered {
                patched.push(r.fail.clone());
            }
        }
        dedup_keep_order(&mut patched);
        let patched_members = patched.len() as u32;
        removed_sets.extend(patched);

        let members: Vec<CoverMember> = removed_sets
            .into_par_iter()
            .map(|removed| {
                let mask = EdgeMask::from_edge_set(g.m(), &removed);
                let sub = g.without_edges(&mask);
                let oracle = spec.build(&sub);
                CoverMember { removed, oracle }
            })
            .collect();

        let mut edge_index = vec![Vec::new(); g.m()];
        for (id, member) in members.iter().enumerate() {
            for e in member.removed.iter() {
                edge_index[e as usize].push(id as u32);
            }
        }
        let fam = CoveringFamily {
            level,
            members,
            edge_index,
            sampled_members,
            patched_members,
        };
        debug_assert!(fam.verify_coverage(records).is_ok());
        fam
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, id: u32) -> &CoverMember {
        &self.members[id as usize]
    }

    /// The coverage certificate: every record has a member excluding its
    /// failure set and containing its path. Returns the index of the first
    /// uncovered record on failure.
    pub fn verify_coverage(&self, records: &[HitMissRecord]) -> Result<(), usize> {
        for (i, r) in records.iter().enumerate() {
            let ok = self
                .candidate_ids(&r.fail)
                .into_iter()
                .any(|id| covers(&self.members[id as usize].removed, r));
            if !ok {
                return Err(i);
            }
        }
        Ok(())
    }

    /// Member ids whose removed set contains every edge of `fail`, ascending.
    fn candidate_ids(&self, fail: &EdgeSet) -> Vec<u32> {
        let mut ids: Option<Vec<u32>> = None;
        for e in fail.iter() {
            let list = &self.edge_index[e as usize];
            ids = Some(match ids {
                None => list.clone(),
                Some(cur) => intersect_sorted(&cur, list),
            });
            if ids.as_ref().is_some_and(|v| v.is_empty()) {
                return Vec::new();
            }
        }
        ids.unwrap_or_else(|| (0..self.members.len() as u32).collect())
    }

    /// The representative oracle for (fail, s, t): among members excluding
    /// `fail`, the one with the minimum estimate, ties to the minimum id.
    /// Returns (None, infinity) when no member excludes `fail` or every
    /// estimate is infinite.
    pub fn select_representative(
        &self,
        fail: &EdgeSet,
        s: VertexId,
        t: VertexId,
    ) -> (Option<u32>, u64) {
        let mut best: Option<u32> = None;
        let mut best_est = u64::MAX;
        for id in self.candidate_ids(fail) {
            let est = self.members[id as usize].oracle.estimate(s, t);
            if est < best_est {
                best_est = est;
                best = Some(id);
            }
        }
        if best_est == u64::MAX {
            (None, u64::MAX)
        } else {
            (best, best_est)
        }
    }

    pub fn space_words(&self) -> u64 {
        let removed: u64 = self.members.iter().map(|m| m.removed.len() as u64).sum();
        let oracles: u64 = self.members.iter().map(|m| m.oracle.space_words()).sum();
        let index: u64 = self.edge_index.iter().map(|l| l.len() as u64).sum();
        removed + oracles + index
    }
}

fn covers(removed: &EdgeSet, r: &HitMissRecord) -> bool {
    r.fail.is_subset_of(removed) && r.path_edges.iter().all(|e| !removed.contains(*e))
}

fn dedup_keep_order(sets: &mut Vec<EdgeSet>) {
    let mut seen = std::collections::HashSet::new();
    sets.retain(|s| seen.insert(s.ids().to_vec()));
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
