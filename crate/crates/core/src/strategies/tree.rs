//! The tree strategy for crossing an edge `xy`, and its equivalent weighting.

use std::collections::VecDeque;

use crate::error::{CrwError, Result};
use crate::graph::Graph;
use crate::walk::{alpha_from_ordering, transitions_from_alpha, EdgeWeights, StrategyTable};

fn require_tree_edge(t: &Graph, root: usize, x: usize, y: usize) -> Result<()> {
    if !t.is_tree() {
        return Err(CrwError::InvalidGraph("graph is not a tree".into()));
    }
    t.check_vertex(root)?;
    if !t.has_edge(x, y) {
        return Err(CrwError::param(format!("{x}-{y} is not an edge")));
    }
    Ok(())
}

/// Neighbour of `v` one step closer to the source of `dist`, if any.
fn toward(t: &Graph, dist: &[usize], v: usize) -> Option<usize> {
    t.neighbours(v).iter().copied().find(|&u| dist[u] + 1 == dist[v])
}

/// Three tiers at every vertex: the step toward `y` first, the step toward
/// `root` last, everything else tied in between. When the two coincide the
/// step toward `y` wins.
pub fn tree_sigma_strategy(t: &Graph, root: usize, x: usize, y: usize) -> Result<StrategyTable> {
    require_tree_edge(t, root, x, y)?;
    let dy = t.distances_connected(y)?;
    let dr = t.distances_connected(root)?;
    let order: Vec<_> = (0..t.n())
        .map(|v| {
            let up = toward(t, &dy, v);
            let back = toward(t, &dr, v).filter(|&b| Some(b) != up);
            let middle: Vec<usize> = t
                .neighbours(v)
                .iter()
                .copied()
                .filter(|&u| Some(u) != up && Some(u) != back)
                .collect();
            [
                up.map(|u| vec![u]),
                (!middle.is_empty()).then_some(middle),
                back.map(|b| vec![b]),
            ]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>()
        })
        .collect();
    alpha_from_ordering(t, &order)
}

/// Reversible weighting of the tree walk under [`tree_sigma_strategy`],
/// normalised by `w(xy) = 1`. Edges on `y`'s side of `xy` get weight 0: the
/// walk from `x` never uses them before reaching `y`.
pub fn tree_edge_weights(t: &Graph, root: usize, x: usize, y: usize) -> Result<EdgeWeights> {
    let sigma = tree_sigma_strategy(t, root, x, y)?;
    let p = transitions_from_alpha(t, &sigma)?;
    let mut w = EdgeWeights::from_fn(t, |_, _| 0.0);
    w.set(x, y, 1.0);
    // Reversibility along a tree: w(vz) / w(pv) = P(v, z) / P(v, p).
    let mut queue = VecDeque::from([(x, y, 1.0)]);
    while let Some((v, parent, w_in)) = queue.pop_front() {
        for &z in t.neighbours(v) {
            if z == parent {
                continue;
            }
            let wz = w_in * p.get(v, z) / p.get(v, parent);
            w.set(v, z, wz);
            queue.push_back((z, v, wz));
        }
    }
    Ok(w)
}
