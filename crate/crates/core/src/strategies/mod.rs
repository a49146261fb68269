//! Named hitting and covering strategies.
//!
//! Unchanging strategies come back as [`StrategyTable`](crate::walk::StrategyTable)s;
//! rules that depend on the covered set implement [`Strategy`](crate::walk::Strategy).

mod cover;
mod torus;
mod tree;
mod weights;

pub use cover::{
    dfs_preorder, snake_order, spanning_walk_cover, torus_cover, GreedyGuide, GreedyUncovered, Guide, PhasedBoostCover,
    PhasedParams, TorusCover, WaypointCover,
};
pub use torus::{torus_product_strategy, TorusGuide};
pub use tree::{tree_edge_weights, tree_sigma_strategy};
pub use weights::{
    bfs_parent, distance_halving_strategy, distance_halving_weights, greedy_toward, transient_weights, WeightRecipe,
};
