//! mwp-flow bound analysis and dependency-driven loop rewriting for a small
//! imperative C subset.
//!
//! The pipeline is: [`frontend`] parses and prints programs, [`algebra`]
//! provides the flow semiring and its matrices, [`analysis`] types every
//! statement with a matrix and decides polynomial boundedness, [`depfission`]
//! builds statement dependence graphs, and [`transform`] rewrites loops
//! (quasi-invariant peeling and fission). [`interp`] is the reference
//! interpreter used to check all of the above.

pub mod algebra;
pub mod analysis;
pub mod cli;
pub mod depfission;
pub mod frontend;
pub mod interp;
pub mod transform;
