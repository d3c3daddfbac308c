//! Possible worlds: the model's randomness sampled up front, a deterministic cascade over
//! it, and exact enumeration for small graphs.

pub mod brute;
pub mod cascade;
pub mod exact;
pub mod properties;
pub mod world;

pub use brute::{brute_force_optimal, exact_objective};
pub use cascade::deterministic_cascade;
pub use exact::{
    enumerate_classes, exact_adoption_probabilities, exact_outcome_distribution, exact_spread, EquivalenceClass,
    ExactOptions, ExactSpread,
};
pub use properties::{find_violation, objective_table, ObjectiveTable, Property, Violation};
pub use world::{sample_world, PossibleWorld, WorldSource};
