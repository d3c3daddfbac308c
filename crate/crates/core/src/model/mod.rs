//! The diffusion model: GAPs, node states and forward simulation.

pub mod estimate;
pub mod gaps;
pub mod simulate;
pub mod state;

pub use estimate::{estimate_adoption_frequency, estimate_boost, estimate_spread, BoostEstimate, SpreadEstimate};
pub use gaps::{GapSet, Item, Regime, GAP_TOL};
pub use simulate::{simulate, simulate_with, CascadeOutcome, EventSink, SimOptions};
pub use state::{ItemState, NodeState};

use serde::{Deserialize, Serialize};

/// Which seed set is being chosen, and for what objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// Choose A-seeds maximizing A's spread given fixed B-seeds.
    #[value(name = "selfinfmax")]
    SelfInfMax,
    /// Choose B-seeds maximizing the boost to A's spread given fixed A-seeds.
    #[value(name = "compinfmax")]
    CompInfMax,
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Problem::SelfInfMax => "selfinfmax",
            Problem::CompInfMax => "compinfmax",
        })
    }
}
