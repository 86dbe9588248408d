//! Subsets of a small ground set, explicit set systems and their operators.

mod algebra;
mod bitmap;
mod json;
mod pipeline;
mod subset;
mod system;

pub use algebra::{algebra_audit, AlgebraCheck, AlgebraReport};
pub use json::SetSystemDoc;
pub use pipeline::{apply_pipeline, parse_pipeline, Op};
pub use subset::{
    explicit_cap, FlipMask, GroundSet, Subset, SubsetIter, DEFAULT_EXPLICIT_CAP, EXPLICIT_CAP_CEILING,
    EXPLICIT_CAP_ENV, MAX_GROUND,
};
pub use system::{Monotonicity, SetSystem};
