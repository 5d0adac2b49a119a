//! Graph substrate for the odo distance-oracle suite.
//!
//! Everything here is deterministic: shortest-path trees are unique and
//! identical across runs and across search directions, which the oracle
//! layers above rely on.

pub mod apsp;
pub mod ball;
pub mod derand;
pub mod gen;
pub mod graph;
pub mod io;
pub mod lca;
pub mod sssp;
pub mod weight;

pub use apsp::AllPairs;
pub use ball::{ball, Ball};
pub use graph::{Edge, EdgeId, EdgeMask, EdgeSet, Graph, GraphError, Path, VertexId};
pub use lca::LcaIndex;
pub use sssp::{hop_bounded_sssp, sssp, sssp_truncated, HopBounded, Label, SsspResult, NO_PARENT};
pub use weight::{parse_ratio, ratio_ceil, Weight};

pub use num_rational::Ratio;

/// Integer-weighted graph (scaled 64-bit weights, exact arithmetic).
pub type IntGraph = Graph<u64>;
/// Floating-point-weighted graph (binary64, exact comparisons).
pub type FloatGraph = Graph<f64>;
