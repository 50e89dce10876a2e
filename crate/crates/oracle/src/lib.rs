//! Explicit-graph oracles: constructions for the standard families, exact
//! linear solves, Laplacian resistance, full-graph evolution and seeded
//! Monte Carlo, plus the umbrella that compares them with array-side formulas.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod evolution;
pub mod exact;
pub mod graph;
pub mod resistance;
pub mod simulate;
pub mod verify;

pub use error::{OracleError, Result};
pub use graph::{build_graph, verify_drg, ExplicitGraph};
