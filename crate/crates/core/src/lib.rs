//! Exact optimal manipulation of sequential allocation.
//!
//! Agents take turns, following a fixed picking sequence, and each takes
//! her favourite remaining item. Agent 0 may report any ranking; the
//! solvers here find a report maximizing her additive utility.

pub mod achievability;
pub mod analysis;
pub mod cli;
pub mod dp;
pub mod error;
pub mod generators;
pub mod ilp;
pub mod instance;
pub mod itemset;
pub mod result;
pub mod simulate;
pub mod solver;

pub use error::{Error, Result};
pub use instance::{Instance, RawInstance, MANIPULATOR};
pub use itemset::ItemSet;
pub use result::{ManipulationResult, ResultReport, SolverStats};
pub use simulate::{simulate, truthful_utility, Allocation};
pub use solver::{solve, Algorithm, SolveOptions};
