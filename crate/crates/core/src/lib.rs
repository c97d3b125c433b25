//! Construction of optimal ordered ad slates under generalized second-price
//! pricing, and a budget-constrained allocation LP that uses the slate solver
//! as its column-pricing subroutine.
//!
//! The crate is organized around a [`model::QueryInstance`] (ranked bidders,
//! CTR matrix, position count, reserve price) and two interchangeable exact
//! solvers: a backward-recursion dynamic program ([`dp`]) and a layered-DAG
//! longest-path formulation ([`path`]) that additionally supports exclusion
//! masks. [`oracle`] provides an exhaustive-enumeration reference optimizer
//! for small instances, and [`colgen`] implements the master LP with column
//! generation on top of the slate solver, backed by the dense simplex in
//! [`simplex`].

pub mod colgen;
pub mod dp;
pub mod model;
pub mod oracle;
pub mod path;
pub mod simplex;

pub use model::{
    Bidder, ModelError, ObjectiveMode, QueryInstance, Slate, SlateSolution,
};
pub use path::{Mask, SolveError};
