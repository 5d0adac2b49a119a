//! Ground-truth oracles and stretch auditors.
//!
//! Every guarantee of the oracle layers is checkable at desk scale against
//! brute force: exact replacement distances, exhaustive decomposable- and
//! expath-distances on tiny instances, and a uniform stretch audit that
//! separates genuine violations from coverage misses.

pub mod audit;
pub mod brute;
pub mod exact;
pub mod trapezoid;

pub use audit::{audit_stretch, audit_stretch_par, AuditReport, Bound, QueryGen, QueryOutcome, Violation};
pub use brute::{exact_decomposable_distance, exact_expath_distance, BruteError};
pub use exact::{exact_replacement_distance, exact_replacement_path, ExactOracle};
pub use trapezoid::{far_away, trapezoid};
