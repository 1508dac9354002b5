//! Statement-level dependences inside loop bodies: invariance degrees for
//! quasi-invariant hoisting and SCC grouping for loop fission.

mod degree;
mod graph;
mod plan;

use thiserror::Error;

pub use degree::{invariance_degrees, quasi_invariant_block, Degree, InvarianceDegree};
pub use graph::{build_dep_graph, use_def, DepEdge, DepGraph, DepKind, UseDef};
pub use plan::{control_kernel, fission_plan, FissionPlan, LoopInfo};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DepError {
    #[error("statement is not a loop")]
    NotALoop,
    #[error("loop cannot be split: {0}")]
    NoSplit(String),
}
