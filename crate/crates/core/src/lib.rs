//! Two-item influence diffusion with adoption probabilities that depend on what a node
//! already holds, and seed selection for one item given the other.

pub mod error;
pub mod graph;
pub mod model;
pub mod rng;
pub mod rrset;
pub mod tim;
pub mod baselines;
pub mod learn;
pub mod sandwich;
pub mod synth;
pub mod world;

pub use error::{Error, Result};
pub use graph::{EdgeId, EdgeListOptions, Graph, NodeId};
pub use model::{GapSet, Item, Problem, Regime};
