//! The injected path-reporting oracle of the fault-tolerance pipeline.
//!
//! A builder spec is applied to every covering subgraph; the resulting
//! oracles must be deterministic in both distance and path queries, and a
//! reported path never has more edges than the reported distance value.

use crate::exact_do::ExactDo;
use crate::hierarchy::HierarchyDo;
use crate::near_additive::NearAdditiveDo;
use crate::pivots::PivotMode;
use num_rational::Ratio;
use odo_core::{Graph, Path, VertexId, Weight};
use serde::{Deserialize, Serialize};

/// Recipe for building one inner oracle on a (sub)graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InnerDoSpec {
    Exact,
    NearAdditive {
        k_closest: usize,
        eps: Ratio<u64>,
        mode: PivotMode,
    },
    Hierarchy {
        k_closest: usize,
        k: u32,
        eps: Ratio<u64>,
        mode: PivotMode,
        tz_seed: u64,
    },
}

impl InnerDoSpec {
    pub fn build<W: Weight>(&self, g: &Graph<W>) -> InnerDo<W> {
        match *self {
            InnerDoSpec::Exact => InnerDo::Exact(ExactDo::build(g)),
            InnerDoSpec::NearAdditive { k_closest, eps, mode } => {
                InnerDo::NearAdditive(NearAdditiveDo::build(g, k_closest, eps, mode))
            }
            InnerDoSpec::Hierarchy {
                k_closest,
                k,
                eps,
                mode,
                tz_seed,
            } => InnerDo::Hierarchy(Box::new(HierarchyDo::build(
                g, k_closest, k, eps, mode, tz_seed, true,
            ))),
        }
    }

    /// Declared stretch when built on a graph with maximum weight `w_max`.
    pub fn stretch_for(&self, w_max: u64) -> (Ratio<u64>, u64) {
        match *self {
            InnerDoSpec::Exact => (Ratio::from_integer(1), 0),
            InnerDoSpec::NearAdditive { eps, .. } => (Ratio::from_integer(1) + eps, 2 * w_max),
            InnerDoSpec::Hierarchy { k, eps, .. } => (
                Ratio::from_integer(2 * k as u64 - 1) + eps,
                4 * k as u64 * w_max,
            ),
        }
    }
}

/// A built inner oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum InnerDo<W> {
    Exact(ExactDo<W>),
    NearAdditive(NearAdditiveDo<W>),
    Hierarchy(Box<HierarchyDo<W>>),
}

impl<W: Weight> InnerDo<W> {
    pub fn estimate(&self, s: VertexId, t: VertexId) -> W {
        match self {
            InnerDo::Exact(o) => o.query(s, t),
            InnerDo::NearAdditive(o) => o.query(s, t),
            InnerDo::Hierarchy(o) => o.query(s, t),
        }
    }

    pub fn path(&self, s: VertexId, t: VertexId) -> (W, Option<Path<W>>) {
        match self {
            InnerDo::Exact(o) => o.query_path(s, t),
            InnerDo::NearAdditive(o) => o.query_path(s, t),
            InnerDo::Hierarchy(o) => o.query_path(s, t),
        }
    }

    pub fn space_words(&self) -> u64 {
        match self {
            InnerDo::Exact(o) => o.space_words(),
            InnerDo::NearAdditive(o) => o.space_words(),
            InnerDo::Hierarchy(o) => o.space_words(),
        }
    }
}
