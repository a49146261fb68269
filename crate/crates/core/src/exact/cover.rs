//! Exact optimal cover time on the state space (current vertex, covered set).
//!
//! Within one covered set `C` the walker only pays time until it steps onto a
//! vertex outside `C`, at which point the game continues from the larger set.
//! So each covered set is an optimal hitting problem whose targets are the
//! frontier vertices, valued by the already-solved larger sets.

use std::collections::HashMap;
use std::sync::Arc;

use rand::RngCore;

use super::hitting::policy_iteration;
use crate::error::{CrwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::walk::{ChoiceGraph, StepContext, Strategy};

pub const COVER_MDP_MAX_N: usize = 14;

// Values closer than this (relative) are treated as tied.
const TIE_TOL: f64 = 1e-9;

/// Of two candidates, `lo < hi`, returns `hi` only if its value is clearly smaller.
fn pick(lo: usize, hi: usize, v_lo: f64, v_hi: f64) -> usize {
    if v_hi < v_lo - TIE_TOL * (1.0 + v_lo.abs()) {
        hi
    } else {
        lo
    }
}

#[derive(Debug, Clone)]
pub struct CoverValue {
    n: usize,
    start: usize,
    initial: u32,
    /// For each solved covered set, `W(y, C)` at every `y ∈ C` (NaN elsewhere).
    values: HashMap<u32, Vec<f64>>,
}

impl CoverValue {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Covered set of the initial state (always contains the start).
    pub fn initial_mask(&self) -> u32 {
        self.initial
    }

    /// Optimal expected time to cover everything from the initial state.
    pub fn expected_cover(&self) -> f64 {
        self.values[&self.initial][self.start]
    }

    /// `W(y, C)`, if the state was reached by the solver.
    pub fn value(&self, y: usize, mask: u32) -> Option<f64> {
        if y >= self.n || mask & (1 << y) == 0 {
            return None;
        }
        self.values.get(&mask).map(|w| w[y])
    }

    /// Value after stepping from covered set `mask` onto `u`.
    pub fn successor_value(&self, mask: u32, u: usize) -> Option<f64> {
        self.value(u, mask | (1 << u))
    }

    /// Number of covered sets solved.
    pub fn layers(&self) -> usize {
        self.values.len()
    }

    /// Neighbours of `current` ordered by successor value, best first, ties by id.
    pub fn preference(&self, g: &Graph, current: usize, mask: u32) -> Vec<usize> {
        let mut nb = g.neighbours(current).to_vec();
        let key = |u: usize| self.successor_value(mask, u).unwrap_or(f64::INFINITY);
        nb.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
        nb
    }
}

fn check_size(g: &Graph) -> Result<()> {
    if g.n() > COVER_MDP_MAX_N {
        return Err(CrwError::SizeGuard(format!(
            "cover MDP limited to n <= {COVER_MDP_MAX_N}, got {}",
            g.n()
        )));
    }
    Ok(())
}

/// Solves the cover MDP from `start` with `covered0` already visited.
pub fn cover_mdp(g: &Graph, start: usize, covered0: &VertexSet) -> Result<CoverValue> {
    check_size(g)?;
    g.check_vertex(start)?;
    g.require_connected()?;
    if let Some(&v) = covered0.as_slice().iter().find(|&&v| v >= g.n()) {
        return Err(CrwError::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let n = g.n();
    let initial = covered0.iter().fold(1u32 << start, |m, v| m | (1 << v));
    let mut solver = Layers {
        g,
        cg: ChoiceGraph::from_graph(g),
        full: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        values: HashMap::new(),
    };
    solver.solve(initial)?;
    Ok(CoverValue {
        n,
        start,
        initial,
        values: solver.values,
    })
}

struct Layers<'g> {
    g: &'g Graph,
    cg: ChoiceGraph,
    full: u32,
    values: HashMap<u32, Vec<f64>>,
}

impl Layers<'_> {
    fn solve(&mut self, mask: u32) -> Result<()> {
        if self.values.contains_key(&mask) {
            return Ok(());
        }
        let n = self.g.n();
        if mask == self.full {
            self.values.insert(mask, vec![0.0; n]);
            return Ok(());
        }
        let inside = |v: usize| mask & (1 << v) != 0;
        let unknown: Vec<usize> = (0..n).filter(|&v| inside(v)).collect();
        let frontier: Vec<usize> = (0..n)
            .filter(|&v| !inside(v) && self.g.neighbours(v).iter().any(|&u| inside(u)))
            .collect();
        let mut terminal = vec![None; n];
        for &f in &frontier {
            let next = mask | (1 << f);
            self.solve(next)?;
            terminal[f] = Some(self.values[&next][f]);
        }
        let solved = policy_iteration(&self.cg, &unknown, &terminal, false)?;
        let mut w = vec![f64::NAN; n];
        for &v in &unknown {
            w[v] = solved.h[v];
        }
        self.values.insert(mask, w);
        Ok(())
    }
}

/// Which of the offered neighbours `v`, `w` of `u` an optimal covering walker
/// takes, given the covered set. Ties go to the smaller id.
pub fn next_step_oracle(g: &Graph, u: usize, v: usize, w: usize, covered: &VertexSet) -> Result<usize> {
    check_size(g)?;
    g.check_vertex(u)?;
    for x in [v, w] {
        if !g.has_edge(u, x) {
            return Err(CrwError::param(format!("{x} is not a neighbour of {u}")));
        }
    }
    let cv = cover_mdp(g, u, covered)?;
    let mask = cv.initial_mask();
    let (a, b) = (v.min(w), v.max(w));
    let va = cv.successor_value(mask, a).expect("successor solved");
    let vb = cv.successor_value(mask, b).expect("successor solved");
    Ok(pick(a, b, va, vb))
}

/// Plays the optimal cover strategy from a solved [`CoverValue`].
#[derive(Debug, Clone)]
pub struct OptimalCoverRule {
    value: Arc<CoverValue>,
}

impl OptimalCoverRule {
    pub fn new(value: Arc<CoverValue>) -> Self {
        Self { value }
    }
}

impl Strategy for OptimalCoverRule {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, _: &mut dyn RngCore) -> usize {
        let mask = ctx.covered.mask().expect("cover MDP graphs are small");
        let key = |u: usize| self.value.successor_value(mask, u).unwrap_or(f64::INFINITY);
        let (lo, hi) = (a.min(b), a.max(b));
        pick(lo, hi, key(lo), key(hi))
    }
}
