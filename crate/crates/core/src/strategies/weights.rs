//! Strategies obtained by emulating edge-weighted walks, and greedy descent.

use crate::error::{CrwError, Result};
use crate::graph::Graph;
use crate::walk::{alpha_for_weighting, alpha_from_ordering, EdgeWeights, StrategyTable};

use super::tree::tree_edge_weights;

/// Named edge weightings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum WeightRecipe {
    /// `w(uv) = 2^{−min(d(u,x), d(v,x))}`.
    DistanceHalving { target: usize },
    /// `w(uv) = 2^{min(d(u,r), d(v,r))}`.
    Transient { root: usize },
    /// The weighting equidistributed with the tree strategy for edge `xy`.
    TreeSigma { root: usize, x: usize, y: usize },
}

impl WeightRecipe {
    pub fn weights(&self, g: &Graph) -> Result<EdgeWeights> {
        match *self {
            Self::DistanceHalving { target } => distance_halving_weights(g, target),
            Self::Transient { root } => transient_weights(g, root),
            Self::TreeSigma { root, x, y } => tree_edge_weights(g, root, x, y),
        }
    }
}

fn min_distance_weights(g: &Graph, source: usize, base: f64) -> Result<EdgeWeights> {
    g.check_vertex(source)?;
    let dist = g.distances_connected(source)?;
    Ok(EdgeWeights::from_fn(g, |u, v| base.powi(dist[u].min(dist[v]) as i32)))
}

pub fn distance_halving_weights(g: &Graph, target: usize) -> Result<EdgeWeights> {
    min_distance_weights(g, target, 0.5)
}

/// Emitted for inspection only.
pub fn transient_weights(g: &Graph, root: usize) -> Result<EdgeWeights> {
    min_distance_weights(g, root, 2.0)
}

/// CRW strategy emulating the distance-halving weighted walk toward `target`.
pub fn distance_halving_strategy(g: &Graph, target: usize) -> Result<StrategyTable> {
    alpha_for_weighting(g, &distance_halving_weights(g, target)?)
}

/// `f(v)`: the smallest-id neighbour of `v` one step closer to `target`.
pub fn bfs_parent(g: &Graph, target: usize) -> Result<Vec<Option<usize>>> {
    g.check_vertex(target)?;
    let dist = g.distances_connected(target)?;
    Ok((0..g.n())
        .map(|v| g.neighbours(v).iter().copied().find(|&u| dist[u] + 1 == dist[v]))
        .collect())
}

/// Take `f(current)` whenever it is offered, otherwise choose uniformly.
pub fn greedy_toward(g: &Graph, target: usize) -> Result<StrategyTable> {
    let parent = bfs_parent(g, target)?;
    let order: Vec<_> = (0..g.n())
        .map(|v| match parent[v] {
            Some(p) => {
                let rest: Vec<usize> = g.neighbours(v).iter().copied().filter(|&u| u != p).collect();
                if rest.is_empty() {
                    vec![vec![p]]
                } else {
                    vec![vec![p], rest]
                }
            }
            None => vec![g.neighbours(v).to_vec()],
        })
        .collect();
    alpha_from_ordering(g, &order).map_err(|e| CrwError::InvalidGraph(e.to_string()))
}
