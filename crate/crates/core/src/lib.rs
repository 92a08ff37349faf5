//! Simulator and verification lab for graph problems in the multi-party
//! blackboard model.

pub mod coins;
pub mod error;
pub mod blackboard;
pub mod graph;
pub mod infocost;
pub mod nontriviality;
pub mod protocols;
pub mod rulingset;

pub use coins::{Coins, Seed, Stream};
pub use error::{Error, Result};
pub use graph::{Edge, Graph, PartitionFunction, ProblemKind, Solution, Verdict};
