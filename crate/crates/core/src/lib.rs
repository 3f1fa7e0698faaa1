//! Exact laboratory for the connectivity Waiter-Client game on graphs that
//! are unions of `q + 1` edge-disjoint spanning trees.

pub mod construct;
pub mod enumerate;
pub mod error;
pub mod game;
pub mod graph;
pub mod solver;
pub mod strategy;

pub use error::{Error, Result};
pub use game::{GameState, Offer, PruningLevel, Side, Transcript};
pub use graph::{Decomposition, EdgeIdx, Graph, Instance, Violation};
pub use solver::{SolveConfig, SolveResult};
