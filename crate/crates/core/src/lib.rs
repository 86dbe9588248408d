//! Monotone set-system approximations of binary solution spaces.
//!
//! Feasible sets of a 0/1 program are viewed as families of subsets of the
//! index set `Δ = [n]`. This crate provides the operator algebra on such
//! families, the tightest monotone inner and outer approximations, the
//! covering / elimination / bimonotone inequalities that describe them,
//! oracle-based separation, and a small exact branch-and-bound solver that
//! uses those inequalities as lazy cuts.
//!
//! Element labels are 0-based inside the library and 1-based in every
//! serialized or printed form.

pub mod approx;
pub mod casestudy;
pub mod cuts;
pub mod demos;
pub mod error;
pub mod graphs;
pub mod rational;
pub mod separation;
pub mod setsys;
pub mod solver;

pub use error::{Error, Result};
