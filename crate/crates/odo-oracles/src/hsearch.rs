//! Hop-budgeted search over the implicit vicinity graph H.
//!
//! H joins every vertex to its K closest. The search performs `budget`
//! relaxation rounds with snapshot semantics, so after round r the table
//! holds exactly the minimum length over H-paths with at most r hops.
//! Vertices are revisited freely until the budget is spent. Keeping one
//! table per round makes hop-exact path reconstruction possible; the tables
//! are owned by a reusable scratch, so steady-state queries allocate nothing.

use crate::vicinity::VicinityIndex;
use odo_core::{VertexId, Weight};

#[derive(Debug, Clone)]
pub struct HopSearch<W> {
    n: usize,
    budget_used: usize,
    /// rounds[r] holds the hop-<=r tables; rounds[0] is the source row.
    dist: Vec<Vec<W>>,
    /// pred[r][v] = H-predecessor that set dist[r][v] in round r
    /// (VertexId::MAX when the value was carried over from round r-1).
    pred: Vec<Vec<VertexId>>,
    seen: Vec<VertexId>,
}

impl<W: Weight> HopSearch<W> {
    pub fn new(n: usize) -> Self {
        HopSearch {
            n,
            budget_used: 0,
            dist: Vec::new(),
            pred: Vec::new(),
            seen: Vec::new(),
        }
    }

    fn ensure_rounds(&mut self, budget: usize) {
        while self.dist.len() <= budget {
            self.dist.push(vec![W::infinity(); self.n]);
            self.pred.push(vec![VertexId::MAX; self.n]);
        }
    }

    /// Runs a fresh search from `src` with the given hop budget.
    pub fn run(&mut self, vic: &VicinityIndex<W>, src: VertexId, budget: u32) {
        let budget = budget as usize;
        self.ensure_rounds(budget);
        self.budget_used = budget;
        self.seen.clear();
        for r in 0..=budget {
            self.dist[r].fill(W::infinity());
            self.pred[r].fill(VertexId::MAX);
        }
        self.dist[0][src as usize] = W::zero();
        self.seen.push(src);
        let mut frontier: Vec<(VertexId, W)> = vec![(src, W::zero())];
        for r in 1..=budget {
            let (done, rest) = self.dist.split_at_mut(r);
            let prev = &done[r - 1];
            let cur = &mut rest[0];
            cur.copy_from_slice(prev);
            let pred_r = &mut self.pred[r];
            let mut improved: Vec<VertexId> = Vec::new();
            for &(v, base) in &frontier {
                for entry in vic.list(v) {
                    if entry.vertex == v {
                        continue;
                    }
                    let cand = base.add_sat(entry.dist);
                    let u = entry.vertex as usize;
                    if cand < cur[u] {
                        if cur[u].is_infinite() && prev[u].is_infinite() {
                            self.seen.push(entry.vertex);
                        }
                        if !improved.contains(&entry.vertex) {
                            improved.push(entry.vertex);
                        }
                        cur[u] = cand;
                        pred_r[u] = v;
                    }
                }
            }
            if improved.is_empty() {
                // copy remaining rounds forward so dist(v) reads stay valid
                for rr in r + 1..=budget {
                    let (a, b) = self.dist.split_at_mut(rr);
                    b[0].copy_from_slice(&a[rr - 1]);
                    self.pred[rr].fill(VertexId::MAX);
                }
                break;
            }
            improved.sort_unstable();
            frontier = improved
                .into_iter()
                .map(|v| (v, cur[v as usize]))
                .collect();
        }
        // seen may contain vertices discovered then... discovery is permanent
        self.seen.sort_unstable();
        self.seen.dedup();
    }

    pub fn reached(&self, v: VertexId) -> bool {
        !self.dist[self.budget_used][v as usize].is_infinite()
    }

    /// Minimum length over H-paths with at most `budget` hops to `v`.
    pub fn dist(&self, v: VertexId) -> W {
        self.dist[self.budget_used][v as usize]
    }

    /// Visited vertices in ascending id order.
    pub fn seen(&self) -> &[VertexId] {
        &self.seen
    }

    /// H-hop chain from the search root to `v` realizing `dist(v)` exactly,
    /// root first.
    pub fn hop_chain(&self, v: VertexId) -> Vec<VertexId> {
        debug_assert!(self.reached(v));
        let mut chain = vec![v];
        let mut cur = v;
        let mut r = self.budget_used;
        loop {
            // earliest round that already holds the current value
            while r > 0 && self.dist[r - 1][cur as usize] == self.dist[r][cur as usize] {
                r -= 1;
            }
            if r == 0 {
                break;
            }
            let p = self.pred[r][cur as usize];
            debug_assert_ne!(p, VertexId::MAX);
            chain.push(p);
            cur = p;
            r -= 1;
        }
        chain.reverse();
        chain
    }
}
