//! Reproducible Monte-Carlo estimation.
//!
//! Trial `i` always draws from `RngStream(seed, i)`, and results are merged in
//! trial order, so reports do not depend on the thread schedule.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CrwError, Result};
use crate::exact::{cover_mdp, hitting_times, optimal_hitting, spectral, strategy_hitting_times, OptimalCoverRule};
use crate::graph::{
    gen_complete, gen_cycle, gen_gnp, gen_grid, gen_path, gen_random_regular, gen_random_subcubic, gen_random_tree,
    gen_torus, Graph, VertexSet,
};
use crate::rng::{RngStream, DEFAULT_SEED};
use crate::strategies::{
    greedy_toward, spanning_walk_cover, torus_cover, torus_product_strategy, GreedyGuide, GreedyUncovered,
    PhasedBoostCover, TorusCover, WaypointCover,
};
use crate::walk::{StepContext, Strategy, StrategyTable, TransitionMatrix, UniformChoice, Walker};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StartPolicy {
    Fixed(usize),
    /// Run from every vertex and report the start with the largest mean.
    WorstCase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    /// Per-trajectory step cap.
    pub cap: usize,
    pub start: StartPolicy,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub strategy_id: String,
    pub graph_id: String,
}

impl TrialConfig {
    pub fn new(trials: usize, cap: usize) -> Self {
        Self {
            seed: DEFAULT_SEED,
            trials,
            cap,
            start: StartPolicy::Fixed(0),
            threads: None,
            strategy_id: String::new(),
            graph_id: String::new(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn start(mut self, start: StartPolicy) -> Self {
        self.start = start;
        self
    }

    pub fn threads(mut self, threads: Option<usize>) -> Self {
        self.threads = threads;
        self
    }

    fn validate(&self, g: &Graph) -> Result<()> {
        if self.trials == 0 {
            return Err(CrwError::param("at least one trial is required"));
        }
        if self.cap < g.n() {
            return Err(CrwError::param(format!("step cap {} is below n = {}", self.cap, g.n())));
        }
        if let StartPolicy::Fixed(v) = self.start {
            g.check_vertex(v)?;
        }
        g.require_connected()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub mean: f64,
    pub std_dev: f64,
    /// 95% normal interval for the mean.
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: usize,
    /// Trials stopped by the cap; they enter the mean at the cap value.
    pub truncated: usize,
    pub start: usize,
}

impl EstimateReport {
    /// Summary of per-trial step counts.
    pub fn from_samples(samples: &[(usize, bool)], start: usize) -> Result<Self> {
        let trials = samples.len();
        if trials == 0 {
            return Err(CrwError::param("no samples"));
        }
        let truncated = samples.iter().filter(|s| s.1).count();
        if truncated == trials {
            return Err(CrwError::AllTruncated(trials));
        }
        let n = trials as f64;
        let mean = samples.iter().map(|s| s.0 as f64).sum::<f64>() / n;
        let var = if trials > 1 {
            samples.iter().map(|s| (s.0 as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std_dev = var.sqrt();
        let half = 1.96 * std_dev / n.sqrt();
        Ok(Self {
            mean,
            std_dev,
            ci_low: mean - half,
            ci_high: mean + half,
            trials,
            truncated,
            start,
        })
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        self.std_dev / (self.trials as f64).sqrt()
    }
}

fn run_parallel<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(job()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| CrwError::param(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Steps until `done` holds (checked before every step), capped.
fn run_trial<S: Strategy>(
    g: &Graph,
    strategy: &mut S,
    start: usize,
    cap: usize,
    rng: &mut dyn RngCore,
    done: impl Fn(usize, &Walker<'_>) -> bool,
) -> (usize, bool) {
    let mut w = Walker::new(g, start).expect("start validated");
    loop {
        if done(w.position(), &w) {
            return (w.time(), false);
        }
        if w.time() >= cap {
            return (w.time(), true);
        }
        w.step(strategy, rng);
    }
}

fn estimate<S, F, D>(g: &Graph, make: &F, cfg: &TrialConfig, done: D) -> Result<EstimateReport>
where
    S: Strategy,
    F: Fn() -> S + Sync,
    D: Fn(usize, &Walker<'_>) -> bool + Sync,
{
    cfg.validate(g)?;
    let starts: Vec<usize> = match cfg.start {
        StartPolicy::Fixed(v) => vec![v],
        StartPolicy::WorstCase => (0..g.n()).collect(),
    };
    let trials = cfg.trials;
    run_parallel(cfg.threads, || {
        let mut worst: Option<EstimateReport> = None;
        for (k, &start) in starts.iter().enumerate() {
            let samples: Vec<(usize, bool)> = (0..trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = RngStream::new(cfg.seed, (k * trials + i) as u64);
                    let mut s = make();
                    run_trial(g, &mut s, start, cfg.cap, &mut rng, &done)
                })
                .collect();
            let r = EstimateReport::from_samples(&samples, start)?;
            if worst.as_ref().is_none_or(|w| r.mean > w.mean) {
                worst = Some(r);
            }
        }
        Ok(worst.expect("at least one start"))
    })?
}

/// Mean number of steps to visit every vertex.
pub fn estimate_cover<S, F>(g: &Graph, make: F, cfg: &TrialConfig) -> Result<EstimateReport>
where
    S: Strategy,
    F: Fn() -> S + Sync,
{
    estimate(g, &make, cfg, |_, w| w.covered().all_covered())
}

/// Mean number of steps from `start` to the first visit of `target`.
pub fn estimate_hitting<S, F>(
    g: &Graph,
    make: F,
    start: usize,
    target: &VertexSet,
    cfg: &TrialConfig,
) -> Result<EstimateReport>
where
    S: Strategy,
    F: Fn() -> S + Sync,
{
    if target.is_empty() {
        return Err(CrwError::param("target set is empty"));
    }
    let inside = target.indicator(g.n());
    let cfg = cfg.clone().start(StartPolicy::Fixed(start));
    estimate(g, &make, &cfg, |v, _| inside[v])
}

/// Mean number of unvisited vertices `U(t)` at each requested time.
pub fn unvisited_profile<S, F>(g: &Graph, make: F, times: &[usize], cfg: &TrialConfig) -> Result<Vec<f64>>
where
    S: Strategy,
    F: Fn() -> S + Sync,
{
    cfg.validate(g)?;
    let StartPolicy::Fixed(start) = cfg.start else {
        return Err(CrwError::param("unvisited profile needs a fixed start"));
    };
    let horizon = times.iter().copied().max().unwrap_or(0);
    let counts: Vec<Vec<usize>> = run_parallel(cfg.threads, || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngStream::new(cfg.seed, i as u64);
                let mut s = make();
                let mut w = Walker::new(g, start).expect("start validated");
                let mut at = vec![0usize; horizon + 1];
                at[0] = w.covered().uncovered();
                for t in 1..=horizon {
                    if !w.covered().all_covered() {
                        w.step(&mut s, &mut rng);
                    }
                    at[t] = w.covered().uncovered();
                }
                times.iter().map(|&t| at[t]).collect()
            })
            .collect()
    })?;
    let n = cfg.trials as f64;
    Ok((0..times.len())
        .map(|k| counts.iter().map(|c| c[k] as f64).sum::<f64>() / n)
        .collect())
}

/// Graph families available to sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Complete,
    Path,
    Cycle,
    /// 2-D torus; the size parameter is the side `k`.
    Torus2,
    /// 2-D grid; the size parameter is the side `k`.
    Grid2,
    /// Random tree with maximum degree 3.
    Tree3,
    /// Random connected graph of maximum degree 3.
    Subcubic,
    /// Random 3-regular graph.
    Regular3,
    /// `G(n, p)` with `p = 2 ln n / n`.
    Gnp,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Complete,
        Family::Path,
        Family::Cycle,
        Family::Torus2,
        Family::Grid2,
        Family::Tree3,
        Family::Subcubic,
        Family::Regular3,
        Family::Gnp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Torus2 => "torus2",
            Family::Grid2 => "grid2",
            Family::Tree3 => "tree3",
            Family::Subcubic => "subcubic",
            Family::Regular3 => "regular3",
            Family::Gnp => "gnp",
        }
    }

    pub fn build(self, size: usize, seed: u64) -> Result<Graph> {
        match self {
            Family::Complete => gen_complete(size),
            Family::Path => gen_path(size),
            Family::Cycle => gen_cycle(size),
            Family::Torus2 => gen_torus(size, 2),
            Family::Grid2 => gen_grid(size, 2),
            Family::Tree3 => gen_random_tree(size, 3, seed),
            Family::Subcubic => gen_random_subcubic(size, size / 10, seed),
            Family::Regular3 => gen_random_regular(size, 3, seed),
            Family::Gnp => {
                let p = (2.0 * (size as f64).ln() / size as f64).min(1.0);
                gen_gnp(size, p, seed)
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CrwError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| CrwError::Parse(format!("unknown family {s:?}")))
    }
}

/// Covering strategies available to sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CoverStrategy {
    Srw,
    GreedyUncovered,
    SpanningWalk,
    TorusCover,
    /// Phased boosting with threshold exponent `c`.
    PhasedBoost {
        c: f64,
    },
    /// Exact optimum from the cover MDP (small graphs only).
    Optimal,
}

impl CoverStrategy {
    pub fn name(&self) -> String {
        match self {
            Self::Srw => "srw".into(),
            Self::GreedyUncovered => "greedy-uncovered".into(),
            Self::SpanningWalk => "spanning-walk".into(),
            Self::TorusCover => "torus-cover".into(),
            Self::PhasedBoost { c } if *c == 3.0 => "phased-boost".into(),
            Self::PhasedBoost { c } => format!("phased-boost:{c}"),
            Self::Optimal => "optimal".into(),
        }
    }

    /// A ready-to-clone rule for covering `g` from `start`.
    pub fn rule(&self, g: &Graph, start: usize) -> Result<NamedRule> {
        Ok(match *self {
            Self::Srw => NamedRule::Uniform(UniformChoice),
            Self::GreedyUncovered => NamedRule::GreedyUncovered(GreedyUncovered),
            Self::SpanningWalk => NamedRule::Spanning(spanning_walk_cover(g, start)?),
            Self::TorusCover => NamedRule::Torus(torus_cover(g, start)?),
            Self::PhasedBoost { c } => {
                let report = spectral(g)?;
                NamedRule::Phased(PhasedBoostCover::from_spectrum(g, &report, c)?)
            }
            Self::Optimal => {
                let cv = cover_mdp(g, start, &VertexSet::new(g.n(), [])?)?;
                NamedRule::Optimal(OptimalCoverRule::new(Arc::new(cv)))
            }
        })
    }
}

impl FromStr for CoverStrategy {
    type Err = CrwError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "srw" => Self::Srw,
            "greedy-uncovered" => Self::GreedyUncovered,
            "spanning-walk" => Self::SpanningWalk,
            "torus-cover" => Self::TorusCover,
            "phased-boost" => Self::PhasedBoost { c: 3.0 },
            "optimal" => Self::Optimal,
            other => match other.strip_prefix("phased-boost:") {
                Some(c) => Self::PhasedBoost {
                    c: c.parse().map_err(|e| CrwError::Parse(format!("C {c:?}: {e}")))?,
                },
                None => return Err(CrwError::Parse(format!("unknown strategy {other:?}"))),
            },
        })
    }
}

/// Any of the crate's rules behind one cloneable type.
#[derive(Debug, Clone)]
pub enum NamedRule {
    Uniform(UniformChoice),
    Table(Arc<StrategyTable>),
    GreedyUncovered(GreedyUncovered),
    Spanning(WaypointCover<GreedyGuide>),
    Torus(TorusCover),
    Phased(PhasedBoostCover),
    Optimal(OptimalCoverRule),
}

impl Strategy for NamedRule {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        match self {
            Self::Uniform(s) => s.choose(ctx, a, b, rng),
            Self::Table(t) => (&**t).choose(ctx, a, b, rng),
            Self::GreedyUncovered(s) => s.choose(ctx, a, b, rng),
            Self::Spanning(s) => s.choose(ctx, a, b, rng),
            Self::Torus(s) => s.choose(ctx, a, b, rng),
            Self::Phased(s) => s.choose(ctx, a, b, rng),
            Self::Optimal(s) => s.choose(ctx, a, b, rng),
        }
    }
}

// Largest n for which sweeps solve hitting problems exactly.
const EXACT_HIT_MAX_N: usize = 300;
const EXACT_COVER_MAX_N: usize = 12;

/// Hitting rule paired with a covering strategy, and its exact mean if known.
fn hitting_rule(strategy: &CoverStrategy, g: &Graph, start: usize, target: usize) -> Result<(NamedRule, Option<f64>)> {
    let set = VertexSet::singleton(target);
    Ok(match strategy {
        CoverStrategy::Srw => {
            let exact = if g.n() <= 2000 {
                Some(hitting_times(&TransitionMatrix::srw(g), &set)?[start])
            } else {
                None
            };
            (NamedRule::Uniform(UniformChoice), exact)
        }
        CoverStrategy::TorusCover => {
            let t = torus_product_strategy(g, target)?;
            let exact = strategy_hitting_times(g, &t, &set)?[start];
            (NamedRule::Table(Arc::new(t)), Some(exact))
        }
        _ if g.n() <= EXACT_HIT_MAX_N => {
            let sol = optimal_hitting(g, &set)?;
            (NamedRule::Table(Arc::new(sol.strategy)), Some(sol.h[start]))
        }
        _ => (NamedRule::Table(Arc::new(greedy_toward(g, target)?)), None),
    })
}

/// Exact expected cover time of a strategy where a closed form or solver exists.
pub fn exact_cover(family: Family, strategy: &CoverStrategy, g: &Graph, start: usize) -> Result<Option<f64>> {
    let n = g.n();
    Ok(match (family, strategy) {
        (Family::Complete, CoverStrategy::Srw) => Some(complete_srw_cover(n)),
        (Family::Complete, CoverStrategy::GreedyUncovered) => Some(complete_greedy_cover(n)),
        (_, CoverStrategy::Optimal) if n <= EXACT_COVER_MAX_N => {
            Some(cover_mdp(g, start, &VertexSet::new(n, [])?)?.expected_cover())
        }
        _ => None,
    })
}

/// SRW cover time of `K_n`: `(n − 1) H_{n−1}`.
pub fn complete_srw_cover(n: usize) -> f64 {
    let m = (n - 1) as f64;
    m * (1..n).map(|k| 1.0 / k as f64).sum::<f64>()
}

/// Cover time of `K_n` when an uncovered offer is always taken:
/// `Σ_{k=1}^{n−1} 1 / (1 − (1 − k/(n−1))²)`.
pub fn complete_greedy_cover(n: usize) -> f64 {
    let m = (n - 1) as f64;
    (1..n)
        .map(|k| {
            let miss = 1.0 - k as f64 / m;
            1.0 / (1.0 - miss * miss)
        })
        .sum()
}

/// One output row of [`compare_table`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub family: String,
    pub n: usize,
    pub strategy: String,
    pub metric: String,
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub exact: Option<f64>,
}

/// Cover and hitting estimates for every `(family, size, strategy)`.
///
/// Hitting is measured from the start to the vertex farthest from it (smallest
/// id among ties), using the strategy's hitting counterpart: the SRW for
/// `srw`, the dimension-priority rule for `torus-cover`, otherwise the
/// optimal hitting strategy (greedy descent on large graphs).
pub fn compare_table(
    sweep: &[(Family, Vec<usize>)],
    strategies: &[CoverStrategy],
    cfg: &TrialConfig,
) -> Result<Vec<CompareRow>> {
    let mut rows = Vec::new();
    for (family, sizes) in sweep {
        for &size in sizes {
            let g = family.build(size, cfg.seed)?;
            let start = match cfg.start {
                StartPolicy::Fixed(v) => v,
                StartPolicy::WorstCase => 0,
            };
            let dist = g.distances_connected(start)?;
            let far = (0..g.n())
                .max_by_key(|&v| (dist[v], std::cmp::Reverse(v)))
                .unwrap_or(start);
            let local = TrialConfig {
                cap: cfg.cap.max(g.n()),
                ..cfg.clone()
            };
            for s in strategies {
                if matches!(s, CoverStrategy::TorusCover) && g.lattice().is_none() {
                    continue;
                }
                if matches!(s, CoverStrategy::Optimal) && g.n() > EXACT_COVER_MAX_N {
                    continue;
                }
                let rule = s.rule(&g, start)?;
                let cover = estimate_cover(&g, || rule.clone(), &local)?;
                rows.push(CompareRow {
                    family: family.name().into(),
                    n: g.n(),
                    strategy: s.name(),
                    metric: "cover".into(),
                    mean: cover.mean,
                    ci_lo: cover.ci_low,
                    ci_hi: cover.ci_high,
                    exact: exact_cover(*family, s, &g, start)?,
                });
                let (hit_rule, exact) = hitting_rule(s, &g, start, far)?;
                let hit = estimate_hitting(&g, || hit_rule.clone(), start, &VertexSet::singleton(far), &local)?;
                rows.push(CompareRow {
                    family: family.name().into(),
                    n: g.n(),
                    strategy: s.name(),
                    metric: "hit".into(),
                    mean: hit.mean,
                    ci_lo: hit.ci_low,
                    ci_hi: hit.ci_high,
                    exact,
                });
            }
        }
    }
    Ok(rows)
}

/// Families and sizes of the standard `table1` sweep.
pub fn table1_sweep() -> Vec<(Family, Vec<usize>)> {
    vec![
        (Family::Complete, vec![8, 100, 1000]),
        (Family::Path, vec![8, 50]),
        (Family::Cycle, vec![8, 50]),
        (Family::Torus2, vec![10, 20, 30]),
        (Family::Tree3, vec![50, 100]),
        (Family::Subcubic, vec![100, 200]),
        (Family::Regular3, vec![250, 500, 1000]),
        (Family::Gnp, vec![200]),
    ]
}

/// Strategies compared in the `table1` sweep. Rows that do not apply
/// (torus cover off a lattice, the exact optimum above 12 vertices) are skipped.
pub fn table1_strategies() -> Vec<CoverStrategy> {
    vec![
        CoverStrategy::Srw,
        CoverStrategy::GreedyUncovered,
        CoverStrategy::SpanningWalk,
        CoverStrategy::TorusCover,
        CoverStrategy::PhasedBoost { c: 3.0 },
        CoverStrategy::Optimal,
    ]
}

/// CSV with columns `family,n,strategy,metric,mean,ci_lo,ci_hi,exact`.
pub fn rows_to_csv(rows: &[CompareRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CrwError::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CrwError::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CrwError::Parse(e.to_string()))
}
