//! Exact solvers: optimal hitting, stationary distributions, the cover MDP and
//! spectral quantities.

mod cover;
mod hitting;
mod spectral;

pub use cover::{cover_mdp, next_step_oracle, CoverValue, OptimalCoverRule, COVER_MDP_MAX_N};
pub use hitting::{
    hitting_times, optimal_hitting, optimal_hitting_multigraph, optimal_return, policy_iteration_trace, stationary,
    strategy_hitting_times, value_iteration_hitting, value_iteration_trace, weighted_walk_matrix, HittingSolution,
    ReturnSolution,
};
pub use spectral::{lazyconv_horizon, lazyconv_search, spectral, SpectralReport, SPECTRAL_MAX_N};
