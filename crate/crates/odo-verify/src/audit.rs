//! Uniform stretch audits.
//!
//! Every oracle guarantee runs through the same reporting machinery: per
//! query, assert estimate >= exact and record whether the declared
//! (alpha_eff, beta_eff) window held; queries whose probabilistic
//! preconditions failed are classified as coverage misses, not violations.

use num_rational::Ratio;
use odo_core::{EdgeSet, Graph, VertexId, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Effective stretch bound (alpha_eff, beta_eff) under audit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bound {
    pub alpha_num: u64,
    pub alpha_den: u64,
    pub beta: f64,
}

impl Bound {
    pub fn new(alpha: Ratio<u64>, beta: f64) -> Self {
        Bound {
            alpha_num: *alpha.numer(),
            alpha_den: *alpha.denom(),
            beta,
        }
    }

    pub fn alpha(&self) -> Ratio<u64> {
        Ratio::new(self.alpha_num, self.alpha_den)
    }

    fn admits(&self, estimate: f64, exact: f64) -> bool {
        if exact.is_infinite() {
            return true;
        }
        if estimate.is_infinite() {
            return false;
        }
        // scale to integers where possible to avoid rounding at the boundary
        estimate * self.alpha_den as f64 <= self.alpha_num as f64 * exact + self.beta * self.alpha_den as f64 + 1e-9
    }
}

/// One audited query and what the oracle answered.
#[derive(Debug, Clone, Serialize)]
pub struct QueryOutcome {
    pub s: VertexId,
    pub t: VertexId,
    pub fail: Vec<u32>,
    pub exact: f64,
    pub estimate: f64,
    pub coverage_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub query: QueryOutcome,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Underestimate,
    StretchExceeded,
}

/// Aggregated audit result. `violations` empty means the audit passed.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub query_count: u64,
    pub bound: Bound,
    pub violations: Vec<Violation>,
    pub coverage_satisfied: u64,
    pub coverage_missed: u64,
    /// max over finite queries of estimate / exact (exact > 0)
    pub max_mult_slack: f64,
    /// max over finite queries of estimate - alpha_eff * exact
    pub max_add_slack: f64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn coverage_fraction(&self) -> f64 {
        if self.query_count == 0 {
            return 1.0;
        }
        self.coverage_satisfied as f64 / self.query_count as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,fail,exact,estimate,coverage_ok,kind\n");
        for v in &self.violations {
            out.push_str(&format!(
                "{},{},{:?},{},{},{},{:?}\n",
                v.query.s,
                v.query.t,
                v.query.fail,
                v.query.exact,
                v.query.estimate,
                v.query.coverage_ok,
                v.kind
            ));
        }
        out
    }

    /// Associative merge for parallel audits; `other` must carry the same
    /// bound and come later in query order.
    pub fn merge(&mut self, other: AuditReport) {
        self.query_count += other.query_count;
        self.coverage_satisfied += other.coverage_satisfied;
        self.coverage_missed += other.coverage_missed;
        self.violations.extend(other.violations);
        self.max_mult_slack = self.max_mult_slack.max(other.max_mult_slack);
        self.max_add_slack = self.max_add_slack.max(other.max_add_slack);
    }

    fn merge_outcome(&mut self, q: QueryOutcome) {
        self.query_count += 1;
        if q.coverage_ok {
            self.coverage_satisfied += 1;
        } else {
            self.coverage_missed += 1;
        }
        if q.exact.is_finite() && q.estimate.is_finite() {
            if q.exact > 0.0 {
                self.max_mult_slack = self.max_mult_slack.max(q.estimate / q.exact);
            }
            let alpha = self.bound.alpha_num as f64 / self.bound.alpha_den as f64;
            self.max_add_slack = self.max_add_slack.max(q.estimate - alpha * q.exact);
        }
        let under = if q.exact.is_infinite() {
            q.estimate.is_finite()
        } else {
            q.estimate < q.exact - 1e-9
        };
        if under {
            self.violations.push(Violation {
                query: q,
                kind: ViolationKind::Underestimate,
            });
            return;
        }
        if q.coverage_ok && !self.bound.admits(q.estimate, q.exact) {
            self.violations.push(Violation {
                query: q,
                kind: ViolationKind::StretchExceeded,
            });
        }
    }
}

/// Query sources for audits.
#[derive(Debug, Clone)]
pub enum QueryGen {
    /// Every ordered pair with the empty failure set.
    ExhaustivePairs,
    /// Every ordered pair crossed with every single-edge failure.
    ExhaustiveSingleFailures,
    /// Seeded random (s, t, F) triples with |F| <= f.
    Random { seed: u64, count: u64, f: u32 },
}

impl QueryGen {
    pub fn queries<W: Weight>(&self, g: &Graph<W>) -> Vec<(VertexId, VertexId, EdgeSet)> {
        let n = g.n() as VertexId;
        match *self {
            QueryGen::ExhaustivePairs => {
                let mut out = Vec::new();
                for s in 0..n {
                    for t in 0..n {
                        out.push((s, t, EdgeSet::new()));
                    }
                }
                out
            }
            QueryGen::ExhaustiveSingleFailures => {
                let mut out = Vec::new();
                for e in 0..g.m() as u32 {
                    let fail = EdgeSet::from_ids(vec![e]);
                    for s in 0..n {
                        for t in s + 1..n {
                            out.push((s, t, fail.clone()));
                        }
                    }
                }
                out
            }
            QueryGen::Random { seed, count, f } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut out = Vec::new();
                for _ in 0..count {
                    let s = rng.gen_range(0..n);
                    let t = rng.gen_range(0..n);
                    let k = rng.gen_range(0..=f);
                    let ids = (0..k)
                        .map(|_| rng.gen_range(0..g.m() as u32))
                        .collect::<Vec<_>>();
                    out.push((s, t, EdgeSet::from_ids(ids)));
                }
                out
            }
        }
    }
}

/// Runs the audit: `oracle` answers (s, t, F) with (estimate, coverage_ok),
/// `exact` supplies ground truth. Everything is evaluated in f64 after exact
/// integer/rational computation on both sides.
pub fn audit_stretch<W: Weight>(
    _g: &Graph<W>,
    queries: &[(VertexId, VertexId, EdgeSet)],
    bound: Bound,
    mut oracle: impl FnMut(VertexId, VertexId, &EdgeSet) -> (f64, bool),
    mut exact: impl FnMut(VertexId, VertexId, &EdgeSet) -> f64,
) -> AuditReport {
    let mut report = empty_report(bound);
    for (s, t, fail) in queries {
        let (estimate, coverage_ok) = oracle(*s, *t, fail);
        let exact_val = exact(*s, *t, fail);
        report.merge_outcome(QueryOutcome {
            s: *s,
            t: *t,
            fail: fail.ids().to_vec(),
            exact: exact_val,
            estimate,
            coverage_ok,
        });
    }
    report
}

fn empty_report(bound: Bound) -> AuditReport {
    AuditReport {
        query_count: 0,
        bound,
        violations: Vec::new(),
        coverage_satisfied: 0,
        coverage_missed: 0,
        max_mult_slack: 0.0,
        max_add_slack: f64::NEG_INFINITY,
    }
}

/// Parallel audit: queries are chunked across threads; per-chunk reports are
/// merged in chunk order, so the output equals the sequential one.
pub fn audit_stretch_par<W: Weight>(
    g: &Graph<W>,
    queries: &[(VertexId, VertexId, EdgeSet)],
    bound: Bound,
    oracle: impl Fn(VertexId, VertexId, &EdgeSet) -> (f64, bool) + Sync,
    exact: impl Fn(VertexId, VertexId, &EdgeSet) -> f64 + Sync,
) -> AuditReport {
    use rayon::prelude::*;
    let chunk = queries.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
    let parts: Vec<AuditReport> = queries
        .par_chunks(chunk)
        .map(|qs| audit_stretch(g, qs, bound, &oracle, &exact))
        .collect();
    let mut out = empty_report(bound);
    for part in parts {
        out.merge(part);
    }
    out
}
