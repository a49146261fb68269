//! The choice random walk: preference tables, exact transitions, simulation.

mod alpha;
mod simulate;
mod transition;

pub use alpha::{
    alpha_for_weighting, alpha_from_global_order, alpha_from_ordering, mixed_partition_alpha, mixed_partition_p,
    rank_probability, EdgeWeights, PairAlpha, StrategyFile, StrategyTable, TieredOrder, VertexAlphas,
};
pub use simulate::{
    offer, pick_with, simulate, step, CoverState, StepContext, Strategy, Trajectory, UniformChoice, Walker,
};
pub use transition::{transitions_from_alpha, ChoiceGraph, TransitionKind, TransitionMatrix};
