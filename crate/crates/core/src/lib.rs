//! Exact counting of graph copies in explicit hosts and in weighted blow-ups.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: small simple graphs on at most [`graph::MAX_VERTICES`] vertices,
//!   standard constructors, structural metrics and graph6 I/O.
//! - [`counting`]: labeled / unlabeled copy counts by injective backtracking.
//! - [`blowup`]: weighted patterns and the falling-factorial copy polynomial,
//!   which counts copies in blow-ups far too large to materialize.
//! - [`constructions`]: the counterexample family for the multipartite
//!   conjecture on `K_r`-free hosts and the ten-vertex-path family.
//! - [`experiments`]: end-to-end verdicts, the pendant-edge reduction checks and
//!   the exhaustive small-`n` extremal oracle.
//! - [`optimizer`]: continuous relaxation over part fractions.
//!
//! With the default `parallel` feature the data-parallel loops run on rayon;
//! without it everything runs sequentially and produces identical results.

pub mod blowup;
mod budget;
pub mod constructions;
pub mod counting;
mod error;
pub mod experiments;
pub mod graph;
pub mod optimizer;
mod par;
pub mod rational;

pub use budget::{Budget, BUDGET_ENV, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use par::is_parallel;

/// Exact non-negative integer used for all copy counts.
pub type BigCount = num_bigint::BigUint;
