//! Real-coded evolutionary optimizer with adaptive operator selection.
//!
//! The search-operator probabilities of the optimizer adapt online from
//! credit assigned to reproduction events. Two credit routes are provided:
//! direct credit (an operator is scored by the immediate survival of its
//! offspring) and event-takeover credit (an operator is scored by how far
//! the lineages of its offspring spread through later populations). The
//! crate also ships the ten-problem benchmark suite, the nine reference
//! algorithm designs, and the nonparametric statistics used to compare
//! them.
//!
//! Core math is generic over the genome scalar (`f32` or `f64`) through
//! [`Real`]; the aliases at the crate root pin the `f64` instantiations
//! used by the experiment harness.

pub mod adapt;
pub mod bench;
pub mod credit;
pub mod design;
pub mod ea;
pub mod genealogy;
pub mod ops;
pub mod scalar;
pub mod stats;

pub use adapt::OperatorPortfolio;
pub use bench::{Bounds, ProblemId, ProblemSpec};
pub use credit::{EventArchive, Measurement};
pub use design::{CreditMode, DesignSpec, Interpretation, DESIGNS};
pub use ea::{EaParams, EaState, Individual, RunRecord};
pub use genealogy::{EventId, EventLog, LineageWindow};
pub use ops::Operator;
pub use scalar::Real;

/// Benchmark problem instantiated at `f64`, as used by the harness.
pub type Problem = ProblemSpec<f64>;
/// Optimizer state instantiated at `f64`, as used by the harness.
pub type Ea = EaState<f64>;
/// Population member instantiated at `f64`.
pub type Member = Individual<f64>;
