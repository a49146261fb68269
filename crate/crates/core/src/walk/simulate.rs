//! Stepping the walk: two neighbours are offered, a strategy picks one.

use rand::{Rng, RngCore};

use super::alpha::StrategyTable;
use crate::error::{CrwError, Result};
use crate::graph::Graph;

/// Which vertices have been visited so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverState {
    visited: Vec<bool>,
    uncovered: usize,
}

impl CoverState {
    pub fn new(n: usize, start: usize) -> Self {
        let mut s = Self {
            visited: vec![false; n],
            uncovered: n,
        };
        s.visit(start);
        s
    }

    /// Marks `v` visited; returns whether it was new.
    pub fn visit(&mut self, v: usize) -> bool {
        if self.visited[v] {
            return false;
        }
        self.visited[v] = true;
        self.uncovered -= 1;
        true
    }

    pub fn is_covered(&self, v: usize) -> bool {
        self.visited[v]
    }

    pub fn uncovered(&self) -> usize {
        self.uncovered
    }

    pub fn all_covered(&self) -> bool {
        self.uncovered == 0
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.visited
    }

    pub fn uncovered_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.visited.iter().enumerate().filter(|(_, &c)| !c).map(|(v, _)| v)
    }

    /// Bitmask of visited vertices, for `n <= 32`.
    pub fn mask(&self) -> Option<u32> {
        (self.visited.len() <= 32).then(|| {
            self.visited
                .iter()
                .enumerate()
                .filter(|(_, &c)| c)
                .fold(0u32, |m, (v, _)| m | (1 << v))
        })
    }
}

/// What a strategy sees when asked to choose.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub time: usize,
    pub current: usize,
    pub covered: &'a CoverState,
}

/// A decision rule. `a` and `b` are the two offered neighbours of
/// `ctx.current` (possibly equal); the return value must be one of them.
pub trait Strategy {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize;
}

impl<S: Strategy + ?Sized> Strategy for &mut S {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        (**self).choose(ctx, a, b, rng)
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        (**self).choose(ctx, a, b, rng)
    }
}

/// Picks `a` with probability `p`. Draws no randomness when the choice is forced.
pub fn pick_with(p: f64, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
    if a == b || p >= 1.0 {
        a
    } else if p <= 0.0 {
        b
    } else if rng.random::<f64>() < p {
        a
    } else {
        b
    }
}

/// The simple random walk as a choice rule: a fair coin between the offers.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformChoice;

impl Strategy for UniformChoice {
    fn choose(&mut self, _: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        pick_with(0.5, a, b, rng)
    }
}

impl Strategy for StrategyTable {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        (&*self).choose(ctx, a, b, rng)
    }
}

impl Strategy for &StrategyTable {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        let p = self
            .alpha(ctx.current, a, b)
            .expect("offered vertices are neighbours of the current vertex");
        pick_with(p, a, b, rng)
    }
}

/// Two neighbours of `v`, independent and uniform with replacement.
pub fn offer(g: &Graph, v: usize, rng: &mut dyn RngCore) -> (usize, usize) {
    let nb = g.neighbours(v);
    let d = nb.len();
    (nb[rng.random_range(0..d)], nb[rng.random_range(0..d)])
}

/// One CRW step from `ctx.current`; returns the next vertex and the offer.
pub fn step<S: Strategy + ?Sized>(
    g: &Graph,
    strategy: &mut S,
    ctx: &StepContext<'_>,
    rng: &mut dyn RngCore,
) -> (usize, (usize, usize)) {
    let (a, b) = offer(g, ctx.current, rng);
    let next = strategy.choose(ctx, a, b, rng);
    debug_assert!(next == a || next == b, "strategy chose a vertex that was not offered");
    (next, (a, b))
}

/// A running walk: position, clock and cover state.
#[derive(Debug, Clone)]
pub struct Walker<'g> {
    graph: &'g Graph,
    position: usize,
    time: usize,
    covered: CoverState,
}

impl<'g> Walker<'g> {
    pub fn new(graph: &'g Graph, start: usize) -> Result<Self> {
        graph.check_vertex(start)?;
        Ok(Self {
            graph,
            position: start,
            time: 0,
            covered: CoverState::new(graph.n(), start),
        })
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn covered(&self) -> &CoverState {
        &self.covered
    }

    pub fn step<S: Strategy + ?Sized>(&mut self, strategy: &mut S, rng: &mut dyn RngCore) -> (usize, usize) {
        let ctx = StepContext {
            time: self.time,
            current: self.position,
            covered: &self.covered,
        };
        let (next, offered) = step(self.graph, strategy, &ctx, rng);
        self.position = next;
        self.time += 1;
        self.covered.visit(next);
        offered
    }
}

/// Vertex sequence `X_0..X_t` with the offered pair of every step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub vertices: Vec<usize>,
    pub offers: Vec<(usize, usize)>,
    /// Whether the stop predicate was met (otherwise the cap was hit).
    pub stopped: bool,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Runs until `stop(position, covered)` holds or `cap` steps were taken.
/// The predicate is checked before the first step as well.
pub fn simulate<S, F>(
    g: &Graph,
    strategy: &mut S,
    start: usize,
    mut stop: F,
    cap: usize,
    rng: &mut dyn RngCore,
) -> Result<Trajectory>
where
    S: Strategy + ?Sized,
    F: FnMut(usize, &CoverState) -> bool,
{
    if cap == 0 {
        return Err(CrwError::param("step cap must be positive"));
    }
    g.require_connected()?;
    let mut w = Walker::new(g, start)?;
    let mut vertices = vec![start];
    let mut offers = Vec::new();
    let mut stopped = stop(start, w.covered());
    while !stopped && w.time() < cap {
        if g.degree(w.position()) == 0 {
            break;
        }
        offers.push(w.step(strategy, rng));
        vertices.push(w.position());
        stopped = stop(w.position(), w.covered());
    }
    Ok(Trajectory {
        vertices,
        offers,
        stopped,
    })
}
