//! Fault-tolerant distance sensitivity oracles.
//!
//! The [`covering`] module builds verified families of subgraph oracles;
//! [`short`] answers hop-short replacement-path queries by emulating
//! discarded fault-tolerant trees over those families; [`general`] combines
//! the hop-short oracle with pivot trees and FT-trees over expaths into a
//! sensitivity oracle for arbitrary distances.

pub mod covering;
pub mod error;
pub mod expath;
pub mod ft_tree;
pub mod general;
pub mod pivot_tree;
pub mod rval;
pub mod short;

pub use covering::{CoverMember, CoveringFamily, CoveringStrategy, HitMissRecord};
pub use error::DsoConfigError;
pub use expath::{block_caps, netpoints, shortest_decomposable, shortest_expath, ExPath, Fragment};
pub use ft_tree::{FtQueryDiag, FtTree, PartPayload, ProbeOutcome};
pub use general::{GeneralBuildStats, GeneralDso, GeneralDsoConfig, QueryDiag};
pub use pivot_tree::{
    build_pivot_sets, build_pivot_trees, default_lambda, PivotForest, PivotNode, PivotSelectMode,
    PivotSets, PivotVerdict,
};
pub use rval::RVal;
pub use short::{RetainedTrees, ShortBuildStats, ShortDso, ShortDsoBuild, ShortDsoError};
