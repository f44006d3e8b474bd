//! Exact graph burning for paths, path forests, spiders and double spiders.

pub mod bitset;
pub mod burn;
pub mod chainlab;
pub mod graph;
pub mod pathforest;
pub mod solver;
pub mod spider;

/// Version of this crate, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use burn::{simulate, BurnError, BurnOutcome, BurningSequence};
pub use graph::{DistanceMatrix, Graph, GraphError};
pub use solver::{burning_number, is_m_burnable, SolveError, SolverConfig};
