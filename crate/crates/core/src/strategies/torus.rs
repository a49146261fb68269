//! Dimension-priority strategy on tori and grids.

use crate::error::{CrwError, Result};
use crate::graph::{Graph, Lattice};
use crate::walk::{alpha_from_ordering, StrategyTable};

/// Ranks the neighbours of a lattice vertex for reaching a target. Steps
/// along the highest axis where the coordinates still differ come before
/// steps along any other axis, and within each group a step that shortens
/// the cyclic gap on its own axis comes before one that does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGuide {
    lattice: Lattice,
}

impl TorusGuide {
    pub fn new(g: &Graph) -> Result<Self> {
        let lattice = *g
            .lattice()
            .ok_or_else(|| CrwError::InvalidGraph("graph carries no torus/grid structure".into()))?;
        Ok(Self { lattice })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Tier of neighbour `u` of `current`, from 0 (best) to 3. All
    /// neighbours share tier 0 once `current == target`.
    pub fn tier(&self, current: usize, target: usize, u: usize) -> usize {
        if current == target {
            return 0;
        }
        let c = self.lattice.coords(current);
        let t = self.lattice.coords(target);
        let x = self.lattice.coords(u);
        let priority = (0..c.len()).rev().find(|&a| c[a] != t[a]).expect("current != target");
        let axis = (0..c.len()).find(|&a| x[a] != c[a]).expect("u is a neighbour");
        let shortens = self.lattice.axis_gap(x[axis], t[axis]) < self.lattice.axis_gap(c[axis], t[axis]);
        2 * usize::from(axis != priority) + usize::from(!shortens)
    }
}

/// The dimension-priority rule toward a fixed `target` as a preference table.
pub fn torus_product_strategy(g: &Graph, target: usize) -> Result<StrategyTable> {
    g.check_vertex(target)?;
    let guide = TorusGuide::new(g)?;
    let order: Vec<_> = (0..g.n())
        .map(|v| {
            let mut tiers = vec![Vec::new(); 4];
            for &u in g.neighbours(v) {
                tiers[guide.tier(v, target, u)].push(u);
            }
            tiers.retain(|t| !t.is_empty());
            tiers
        })
        .collect();
    alpha_from_ordering(g, &order)
}
