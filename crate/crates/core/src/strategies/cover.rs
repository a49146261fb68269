//! Covering rules that look at the covered set.

use std::sync::Arc;

use rand::RngCore;

use super::torus::TorusGuide;
use crate::boost::{EventDP, EventSpec, Mode};
use crate::error::{CrwError, Result};
use crate::exact::SpectralReport;
use crate::graph::{Graph, VertexSet};
use crate::walk::{pick_with, CoverState, StepContext, Strategy};

/// Ranks neighbours of `current` for heading to `target`; lower is better.
pub trait Guide {
    fn tier(&self, current: usize, target: usize, u: usize) -> usize;
}

impl Guide for TorusGuide {
    fn tier(&self, current: usize, target: usize, u: usize) -> usize {
        TorusGuide::tier(self, current, target, u)
    }
}

/// Greedy descent toward any target: the smallest-id neighbour one step
/// closer is tier 0, everything else tier 1.
#[derive(Debug, Clone)]
pub struct GreedyGuide {
    graph: Arc<Graph>,
    // dist[t][v]
    dist: Arc<Vec<Vec<u32>>>,
}

impl GreedyGuide {
    pub fn new(g: &Graph) -> Result<Self> {
        g.require_connected()?;
        let dist = (0..g.n())
            .map(|t| {
                g.distances_connected(t)
                    .map(|d| d.into_iter().map(|x| x as u32).collect())
            })
            .collect::<Result<Vec<Vec<u32>>>>()?;
        Ok(Self {
            graph: Arc::new(g.clone()),
            dist: Arc::new(dist),
        })
    }

    fn parent(&self, current: usize, target: usize) -> Option<usize> {
        let d = &self.dist[target];
        self.graph
            .neighbours(current)
            .iter()
            .copied()
            .find(|&u| d[u] + 1 == d[current])
    }
}

impl Guide for GreedyGuide {
    fn tier(&self, current: usize, target: usize, u: usize) -> usize {
        usize::from(self.parent(current, target) != Some(u))
    }
}

/// Visits a fixed list of waypoints in order, skipping covered ones, and
/// heads for the next uncovered waypoint with `guide`.
#[derive(Debug, Clone)]
pub struct WaypointCover<G> {
    waypoints: Arc<Vec<usize>>,
    guide: G,
    next: usize,
}

impl<G: Guide> WaypointCover<G> {
    pub fn new(waypoints: Vec<usize>, guide: G) -> Self {
        Self {
            waypoints: Arc::new(waypoints),
            guide,
            next: 0,
        }
    }

    pub fn waypoints(&self) -> &[usize] {
        &self.waypoints
    }
}

impl<G: Guide> Strategy for WaypointCover<G> {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        if ctx.time == 0 {
            self.next = 0;
        }
        while self.next < self.waypoints.len() && ctx.covered.is_covered(self.waypoints[self.next]) {
            self.next += 1;
        }
        let Some(&target) = self.waypoints.get(self.next) else {
            return pick_with(0.5, a, b, rng);
        };
        let ta = self.guide.tier(ctx.current, target, a);
        let tb = self.guide.tier(ctx.current, target, b);
        match ta.cmp(&tb) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => pick_with(0.5, a, b, rng),
        }
    }
}

/// First visits of a depth-first traversal from `start` (neighbours by id).
pub fn dfs_preorder(g: &Graph, start: usize) -> Result<Vec<usize>> {
    g.check_vertex(start)?;
    g.require_connected()?;
    let mut seen = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        order.push(v);
        for &u in g.neighbours(v).iter().rev() {
            if !seen[u] {
                stack.push(u);
            }
        }
    }
    Ok(order)
}

/// Greedy descent along the depth-first spanning walk from `start`.
pub fn spanning_walk_cover(g: &Graph, start: usize) -> Result<WaypointCover<GreedyGuide>> {
    Ok(WaypointCover::new(dfs_preorder(g, start)?, GreedyGuide::new(g)?))
}

/// Boustrophedon order of a lattice: axis 0 runs fastest and every axis
/// reverses direction whenever a slower axis has advanced an odd number of times.
pub fn snake_order(g: &Graph) -> Result<Vec<usize>> {
    let lat = *TorusGuide::new(g)?.lattice();
    let k = lat.side;
    Ok((0..g.n())
        .map(|i| {
            let mut digits: Vec<usize> = (0..lat.dims).map(|a| (i / k.pow(a as u32)) % k).collect();
            let mut parity = 0;
            for a in (0..lat.dims).rev() {
                let raw = digits[a];
                if parity % 2 == 1 {
                    digits[a] = k - 1 - raw;
                }
                parity += raw;
            }
            lat.vertex(&digits)
        })
        .collect())
}

/// Heads for the nearest uncovered vertex of a torus or grid (cyclic `L1`
/// distance, ties by position in the snake order) with the dimension-priority
/// guide, and picks a new target once the current one is covered.
#[derive(Debug, Clone)]
pub struct TorusCover {
    guide: TorusGuide,
    snake_rank: Arc<Vec<usize>>,
    target: Option<usize>,
}

impl TorusCover {
    fn nearest_uncovered(&self, current: usize, covered: &CoverState) -> Option<usize> {
        let lat = self.guide.lattice();
        let c = lat.coords(current);
        covered.uncovered_vertices().min_by_key(|&v| {
            let x = lat.coords(v);
            let dist: usize = (0..lat.dims).map(|a| lat.axis_gap(c[a], x[a])).sum();
            (dist, self.snake_rank[v])
        })
    }
}

impl Strategy for TorusCover {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        if ctx.time == 0 {
            self.target = None;
        }
        if self.target.is_none_or(|t| ctx.covered.is_covered(t)) {
            self.target = self.nearest_uncovered(ctx.current, ctx.covered);
        }
        let Some(target) = self.target else {
            return pick_with(0.5, a, b, rng);
        };
        let ta = self.guide.tier(ctx.current, target, a);
        let tb = self.guide.tier(ctx.current, target, b);
        match ta.cmp(&tb) {
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Equal => pick_with(0.5, a, b, rng),
        }
    }
}

/// Covering rule for tori and grids built on the dimension-priority guide.
pub fn torus_cover(g: &Graph, start: usize) -> Result<TorusCover> {
    g.check_vertex(start)?;
    let mut snake_rank = vec![0; g.n()];
    for (i, v) in snake_order(g)?.into_iter().enumerate() {
        snake_rank[v] = i;
    }
    Ok(TorusCover {
        guide: TorusGuide::new(g)?,
        snake_rank: Arc::new(snake_rank),
        target: None,
    })
}

/// Takes an uncovered offer when there is exactly one, otherwise uniform.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyUncovered;

impl Strategy for GreedyUncovered {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        match (ctx.covered.is_covered(a), ctx.covered.is_covered(b)) {
            (false, true) => a,
            (true, false) => b,
            _ => pick_with(0.5, a, b, rng),
        }
    }
}

/// Settings of [`PhasedBoostCover`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasedParams {
    /// Switch to boosting once at most this many vertices are uncovered.
    pub threshold: usize,
    /// Length of one boosted hitting attempt.
    pub attempt: usize,
}

impl PhasedParams {
    /// `threshold = max(1, ⌊n / ln(n)^c⌋)`, `attempt = ⌈4 t_rel ln n⌉`.
    pub fn new(n: usize, t_rel: f64, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(CrwError::param("phased cover needs n >= 2"));
        }
        if !(t_rel >= 1.0 && t_rel.is_finite()) || !c.is_finite() {
            return Err(CrwError::param("t_rel must be finite and >= 1, C finite"));
        }
        let ln = (n as f64).ln();
        Ok(Self {
            threshold: ((n as f64 / ln.powf(c)).floor() as usize).max(1),
            attempt: (4.0 * t_rel * ln).ceil().max(1.0) as usize,
        })
    }
}

/// Simple random walk until few vertices remain uncovered, then repeated
/// attempts to hit the uncovered set within a fixed window, each played
/// optimally for that window. The plan is recomputed whenever a new vertex
/// is covered.
#[derive(Debug, Clone)]
pub struct PhasedBoostCover {
    graph: Arc<Graph>,
    params: PhasedParams,
    plan: Option<Plan>,
}

#[derive(Debug, Clone)]
struct Plan {
    uncovered: usize,
    dp: Arc<EventDP>,
    // distance from each vertex to the uncovered set
    dist: Vec<usize>,
    started: usize,
}

impl PhasedBoostCover {
    pub fn new(g: &Graph, params: PhasedParams) -> Result<Self> {
        g.require_connected()?;
        Ok(Self {
            graph: Arc::new(g.clone()),
            params,
            plan: None,
        })
    }

    /// Parameters from a spectral report, with exponent `c` in the threshold.
    pub fn from_spectrum(g: &Graph, report: &SpectralReport, c: f64) -> Result<Self> {
        Self::new(g, PhasedParams::new(g.n(), report.t_rel, c)?)
    }

    pub fn params(&self) -> PhasedParams {
        self.params
    }

    fn replan(&mut self, ctx: &StepContext<'_>) -> Result<()> {
        let targets: Vec<usize> = ctx.covered.uncovered_vertices().collect();
        let set = VertexSet::new(self.graph.n(), targets.iter().copied())?;
        let dp = EventDP::new(
            &self.graph,
            EventSpec::HitSetByT {
                set,
                t: self.params.attempt,
            },
            Mode::Max,
        )?;
        let dist = self
            .graph
            .bfs_from_set(&targets)
            .into_iter()
            .map(|d| d.unwrap_or(usize::MAX))
            .collect();
        self.plan = Some(Plan {
            uncovered: ctx.covered.uncovered(),
            dp: Arc::new(dp),
            dist,
            started: ctx.time,
        });
        Ok(())
    }
}

impl Strategy for PhasedBoostCover {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        if ctx.time == 0 {
            self.plan = None;
        }
        if ctx.covered.uncovered() > self.params.threshold || ctx.covered.all_covered() {
            return pick_with(0.5, a, b, rng);
        }
        if self
            .plan
            .as_ref()
            .is_none_or(|p| p.uncovered != ctx.covered.uncovered())
        {
            self.replan(ctx).expect("uncovered set is valid");
        }
        let attempt = self.params.attempt;
        let plan = self.plan.as_mut().expect("planned");
        if ctx.time - plan.started >= attempt {
            plan.started = ctx.time;
        }
        // steps left in this attempt after the current move
        let left = attempt - (ctx.time - plan.started) - 1;
        let va = plan.dp.layer_value(a, left).expect("within horizon");
        let vb = plan.dp.layer_value(b, left).expect("within horizon");
        if va > vb {
            a
        } else if vb > va {
            b
        } else {
            match plan.dist[a].cmp(&plan.dist[b]) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => pick_with(0.5, a, b, rng),
            }
        }
    }
}
