//! Choice random walks on graphs.
//!
//! A choice random walk (CRW) is a walk where, at every step, a controller is
//! offered two neighbours of the current vertex sampled independently and
//! uniformly with replacement, and moves to one of them. This crate covers:
//!
//! * [`graph`]: simple graphs, weighted multigraphs, generators, contraction and file I/O.
//! * [`walk`]: preference tables, exact transition matrices and simulation.
//! * [`strategies`]: named hitting and covering strategies.
//! * [`boost`]: the max/min choice operators and the trajectory-tree dynamic program.
//! * [`exact`]: optimal hitting by policy iteration, the exact cover MDP and spectral quantities.
//! * [`harness`]: reproducible Monte-Carlo estimation.
//! * [`cli`]: the `crw` command-line front end.

pub mod boost;
pub mod cli;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod rng;
pub mod strategies;
pub mod walk;

pub use error::{CrwError, Result};
pub use graph::{Graph, VertexSet, WeightedMultigraph};
pub use walk::{StrategyTable, TransitionMatrix};
