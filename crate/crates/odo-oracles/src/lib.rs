//! Static approximate distance oracles over the odo graph substrate.

pub mod exact_do;
pub mod hierarchy;
pub mod hsearch;
pub mod inner;
pub mod near_additive;
pub mod pivots;
pub mod subset_tz;
pub mod vicinity;

pub use exact_do::ExactDo;
pub use hierarchy::HierarchyDo;
pub use inner::{InnerDo, InnerDoSpec};
pub use near_additive::{DoWorkspace, NaBranch, NearAdditiveDo};
pub use pivots::{PivotAssignment, PivotMode, PivotRow};
pub use subset_tz::{SubsetTz, SubsetTzError};
pub use vicinity::{VicEntry, VicinityIndex};
