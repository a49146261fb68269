//! Choice operators and the trajectory-tree dynamic program.
//!
//! With one choice per step the walker can raise the probability `p` of an
//! event (under the simple random walk) to at least `p^γ`, or push a bad
//! event down to at most `p²`. The DP computes the optimal probability for
//! an event by working back from the horizon: a vertex is worth the max-choice
//! (or min-choice, or plain) average of its children's values.

use std::fmt;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{CrwError, Result};
use crate::graph::{Graph, VertexSet};
use crate::walk::{pick_with, StepContext, Strategy};

/// Default horizon limit for events given by an arbitrary trajectory predicate.
pub const GENERIC_HORIZON_CAP: usize = 12;
/// Horizon limit for the set events.
pub const SET_HORIZON_CAP: usize = 1_000_000;
// Trajectory count above which the generic DP refuses to run.
const GENERIC_LEAF_CAP: f64 = 5e7;

/// `γ_d = log_d(d² / (2d − 1))`.
pub fn gamma(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(CrwError::param(format!("gamma needs d >= 2, got {d}")));
    }
    let d = d as f64;
    Ok((d * d / (2.0 * d - 1.0)).ln() / d.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BoostParams {
    pub dmax: usize,
    pub gamma: f64,
}

impl BoostParams {
    pub fn new(dmax: usize) -> Result<Self> {
        Ok(Self {
            dmax,
            gamma: gamma(dmax)?,
        })
    }

    /// Parameters for a graph, using its maximum degree (at least 2).
    pub fn for_graph(g: &Graph) -> Self {
        Self::new(g.max_degree().max(2)).expect("dmax >= 2")
    }
}

fn sorted(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(CrwError::param("operator needs at least one value"));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// `(1/m²) Σ_i Σ_j max(x_i, x_j)`.
pub fn mc2(values: &[f64]) -> Result<f64> {
    let v = sorted(values)?;
    let m = v.len();
    // the r-th smallest (1-based) is the max of 2r − 1 ordered pairs
    let s: f64 = v.iter().enumerate().map(|(r, x)| x * (2 * r + 1) as f64).sum();
    Ok(s / (m * m) as f64)
}

/// `(1/m²) Σ_i Σ_j min(x_i, x_j)`.
pub fn mc2_min(values: &[f64]) -> Result<f64> {
    let v = sorted(values)?;
    let m = v.len();
    let s: f64 = v.iter().enumerate().map(|(r, x)| x * (2 * (m - r) - 1) as f64).sum();
    Ok(s / (m * m) as f64)
}

/// `M_p(x) = ((1/m) Σ x_i^p)^{1/p}`, `p ≠ 0`.
pub fn power_mean(p: f64, values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(CrwError::param("power mean needs at least one value"));
    }
    if p == 0.0 || !p.is_finite() {
        return Err(CrwError::param("power mean exponent must be finite and non-zero"));
    }
    let m = values.len() as f64;
    Ok((values.iter().map(|x| x.powf(p)).sum::<f64>() / m).powf(1.0 / p))
}

/// The event whose probability is optimised over a horizon `t`.
#[derive(Clone)]
pub enum EventSpec {
    /// The walk visits `set` at some time in `0..=t`.
    HitSetByT { set: VertexSet, t: usize },
    /// The walk is in `set` at time `t`.
    AtSetAtT { set: VertexSet, t: usize },
    /// `predicate(x_0..=x_t)` holds for the trajectory.
    Generic {
        t: usize,
        predicate: Arc<dyn Fn(&[usize]) -> bool + Send + Sync>,
    },
}

impl fmt::Debug for EventSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::HitSetByT { set, t } => write!(f, "HitSetByT({:?}, {t})", set.as_slice()),
            Self::AtSetAtT { set, t } => write!(f, "AtSetAtT({:?}, {t})", set.as_slice()),
            Self::Generic { t, .. } => write!(f, "Generic(t = {t})"),
        }
    }
}

impl EventSpec {
    pub fn horizon(&self) -> usize {
        match self {
            Self::HitSetByT { t, .. } | Self::AtSetAtT { t, .. } | Self::Generic { t, .. } => *t,
        }
    }

    /// Parses `hit:<set>:<t>` or `at:<set>:<t>`, with `<set>` like `0,3,5`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let [kind, set, t] = parts.as_slice() else {
            return Err(CrwError::Parse(format!("event {text:?} is not kind:set:t")));
        };
        let set = VertexSet::parse(n, set)?;
        let t = t
            .trim()
            .parse::<usize>()
            .map_err(|e| CrwError::Parse(format!("horizon {t:?}: {e}")))?;
        match *kind {
            "hit" => Ok(Self::HitSetByT { set, t }),
            "at" => Ok(Self::AtSetAtT { set, t }),
            other => Err(CrwError::Parse(format!("unknown event kind {other:?}"))),
        }
    }

    /// Whether a complete trajectory `x_0..=x_t` belongs to the event.
    pub fn holds(&self, trajectory: &[usize]) -> bool {
        match self {
            Self::HitSetByT { set, .. } => trajectory.iter().any(|&v| set.contains(v)),
            Self::AtSetAtT { set, .. } => trajectory.last().is_some_and(|&v| set.contains(v)),
            Self::Generic { predicate, .. } => predicate(trajectory),
        }
    }
}

/// How the walker uses its choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Mode {
    /// Maximise the event probability (CRW boost).
    Max,
    /// Minimise it (CRW anti-boost).
    Min,
    /// No choice: the simple random walk.
    Mean,
}

impl Mode {
    fn combine(self, values: &[f64]) -> f64 {
        match self {
            Mode::Max => mc2(values).expect("non-empty"),
            Mode::Min => mc2_min(values).expect("non-empty"),
            Mode::Mean => values.iter().sum::<f64>() / values.len() as f64,
        }
    }

    /// Whether value `a` is preferred over `b` (strictly).
    fn prefers(self, a: f64, b: f64) -> bool {
        match self {
            Mode::Max => a > b,
            Mode::Min => a < b,
            Mode::Mean => false,
        }
    }
}

/// Solved DP for one event and mode.
#[derive(Debug, Clone)]
pub struct EventDP {
    graph: Graph,
    event: EventSpec,
    mode: Mode,
    /// For set events: `layers[k][x]` is the value at `x` with `k` steps left
    /// (for hitting, before `x` is checked against the set).
    layers: Vec<Vec<f64>>,
    generic_cap: usize,
}

impl EventDP {
    pub fn new(g: &Graph, event: EventSpec, mode: Mode) -> Result<Self> {
        Self::with_cap(g, event, mode, GENERIC_HORIZON_CAP)
    }

    pub fn with_cap(g: &Graph, event: EventSpec, mode: Mode, generic_cap: usize) -> Result<Self> {
        let t = event.horizon();
        let layers = match &event {
            EventSpec::HitSetByT { set, .. } | EventSpec::AtSetAtT { set, .. } => {
                if set.is_empty() {
                    return Err(CrwError::param("event set is empty"));
                }
                if let Some(&v) = set.as_slice().iter().find(|&&v| v >= g.n()) {
                    return Err(CrwError::VertexOutOfRange { vertex: v, n: g.n() });
                }
                if t > SET_HORIZON_CAP {
                    return Err(CrwError::HorizonCap {
                        horizon: t,
                        cap: SET_HORIZON_CAP,
                    });
                }
                set_layers(g, set, t, mode, matches!(event, EventSpec::HitSetByT { .. }))
            }
            EventSpec::Generic { .. } => {
                check_generic(g, t, generic_cap)?;
                Vec::new()
            }
        };
        Ok(Self {
            graph: g.clone(),
            event,
            mode,
            layers,
            generic_cap,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn event(&self) -> &EventSpec {
        &self.event
    }

    pub fn horizon(&self) -> usize {
        self.event.horizon()
    }

    /// Optimal probability of the event for a walk started at `u`.
    pub fn value(&self, u: usize) -> Result<f64> {
        self.graph.check_vertex(u)?;
        Ok(match &self.event {
            EventSpec::Generic { .. } => self.prefix_value(&mut vec![u]),
            _ => self.layers[self.horizon()][u],
        })
    }

    /// Value at `x` with `k` steps remaining, for the set events.
    pub fn layer_value(&self, x: usize, k: usize) -> Option<f64> {
        self.layers.get(k).map(|l| l[x])
    }

    /// Value of the subtree below a trajectory prefix (generic events).
    fn prefix_value(&self, prefix: &mut Vec<usize>) -> f64 {
        if prefix.len() == self.horizon() + 1 {
            return if self.event.holds(prefix) { 1.0 } else { 0.0 };
        }
        let last = *prefix.last().unwrap();
        let children: Vec<f64> = self
            .graph
            .neighbours(last)
            .iter()
            .map(|&u| {
                prefix.push(u);
                let v = self.prefix_value(prefix);
                prefix.pop();
                v
            })
            .collect();
        self.mode.combine(&children)
    }

    /// Values of the possible next vertices given the trajectory so far.
    fn child_value(&self, prefix: &[usize], hit: bool, child: usize) -> Option<f64> {
        let t = self.horizon();
        let k = t.checked_sub(prefix.len())?;
        Some(match &self.event {
            EventSpec::HitSetByT { .. } if hit => 1.0,
            EventSpec::HitSetByT { .. } | EventSpec::AtSetAtT { .. } => self.layers[k][child],
            EventSpec::Generic { .. } => {
                let mut p = prefix.to_vec();
                p.push(child);
                self.prefix_value(&mut p)
            }
        })
    }

    pub fn generic_cap(&self) -> usize {
        self.generic_cap
    }
}

fn check_generic(g: &Graph, t: usize, cap: usize) -> Result<()> {
    if t > cap {
        return Err(CrwError::HorizonCap { horizon: t, cap });
    }
    let leaves = (g.max_degree().max(1) as f64).powi(t as i32);
    if leaves > GENERIC_LEAF_CAP {
        return Err(CrwError::SizeGuard(format!(
            "trajectory tree has about {leaves:.0} leaves"
        )));
    }
    Ok(())
}

fn set_layers(g: &Graph, set: &VertexSet, t: usize, mode: Mode, hitting: bool) -> Vec<Vec<f64>> {
    let n = g.n();
    let inside = set.indicator(n);
    let indicator: Vec<f64> = inside.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let mut layers = Vec::with_capacity(t + 1);
    layers.push(indicator);
    let mut buf = Vec::new();
    for k in 1..=t {
        let prev = &layers[k - 1];
        let next: Vec<f64> = (0..n)
            .map(|x| {
                if hitting && inside[x] {
                    return 1.0;
                }
                buf.clear();
                buf.extend(g.neighbours(x).iter().map(|&u| prev[u]));
                if buf.is_empty() {
                    0.0
                } else {
                    mode.combine(&buf)
                }
            })
            .collect();
        layers.push(next);
    }
    layers
}

/// Plays the optimal choice for an [`EventDP`] from time 0: take the offer
/// with the better value, ties to the smaller id. After the horizon the rule
/// chooses uniformly.
#[derive(Debug, Clone)]
pub struct BoostRule {
    dp: Arc<EventDP>,
    prefix: Vec<usize>,
    hit: bool,
}

impl BoostRule {
    pub fn new(dp: Arc<EventDP>) -> Self {
        Self {
            dp,
            prefix: Vec::new(),
            hit: false,
        }
    }

    pub fn dp(&self) -> &EventDP {
        &self.dp
    }
}

impl Strategy for BoostRule {
    fn choose(&mut self, ctx: &StepContext<'_>, a: usize, b: usize, rng: &mut dyn RngCore) -> usize {
        if ctx.time == 0 {
            self.prefix.clear();
            self.hit = false;
        }
        self.prefix.push(ctx.current);
        if let EventSpec::HitSetByT { set, .. } = &self.dp.event {
            self.hit |= set.contains(ctx.current);
        }
        let values = (
            self.dp.child_value(&self.prefix, self.hit, a),
            self.dp.child_value(&self.prefix, self.hit, b),
        );
        let (Some(va), Some(vb)) = values else {
            return pick_with(0.5, a, b, rng);
        };
        let mode = self.dp.mode;
        let (lo, hi, v_lo, v_hi) = if a <= b { (a, b, va, vb) } else { (b, a, vb, va) };
        if mode == Mode::Mean {
            pick_with(0.5, a, b, rng)
        } else if mode.prefers(v_hi, v_lo) {
            hi
        } else {
            lo
        }
    }
}

/// Optimal CRW probability of the event from `u`, with the rule achieving it.
pub fn max_boost(g: &Graph, u: usize, event: EventSpec) -> Result<(f64, BoostRule)> {
    boost(g, u, event, Mode::Max)
}

/// Smallest CRW probability of the event from `u`, with the rule achieving it.
pub fn min_boost(g: &Graph, u: usize, event: EventSpec) -> Result<(f64, BoostRule)> {
    boost(g, u, event, Mode::Min)
}

fn boost(g: &Graph, u: usize, event: EventSpec, mode: Mode) -> Result<(f64, BoostRule)> {
    let dp = EventDP::new(g, event, mode)?;
    let q = dp.value(u)?;
    Ok((q, BoostRule::new(Arc::new(dp))))
}

/// Probability of the event under the simple random walk from `u`.
pub fn srw_probability(g: &Graph, u: usize, event: EventSpec) -> Result<f64> {
    EventDP::new(g, event, Mode::Mean)?.value(u)
}

/// `Φ^{(i)} = Σ_{|x| = i} q_x^{1/γ} P(W_u(i) = x)` for `i = 0..=t`, where `q_x`
/// is the max-boost value below prefix `x` and `W` is the simple random walk.
pub fn phi_diagnostic(g: &Graph, u: usize, event: EventSpec) -> Result<Vec<f64>> {
    let eta = 1.0 / BoostParams::for_graph(g).gamma;
    potential(g, u, event, Mode::Max, eta)
}

/// `Ψ^{(i)} = Σ_{|x| = i} q_x^{1/2} P(W_u(i) = x)` with `q_x` the min-boost value.
pub fn psi_diagnostic(g: &Graph, u: usize, event: EventSpec) -> Result<Vec<f64>> {
    potential(g, u, event, Mode::Min, 0.5)
}

fn potential(g: &Graph, u: usize, event: EventSpec, mode: Mode, exponent: f64) -> Result<Vec<f64>> {
    g.check_vertex(u)?;
    let t = event.horizon();
    check_generic(g, t, GENERIC_HORIZON_CAP)?;
    let dp = EventDP {
        graph: g.clone(),
        event,
        mode,
        layers: Vec::new(),
        generic_cap: GENERIC_HORIZON_CAP,
    };
    let mut acc = vec![0.0; t + 1];
    fn walk(dp: &EventDP, prefix: &mut Vec<usize>, prob: f64, exponent: f64, acc: &mut [f64]) -> f64 {
        let depth = prefix.len() - 1;
        let q = if depth == dp.horizon() {
            if dp.event.holds(prefix) {
                1.0
            } else {
                0.0
            }
        } else {
            let last = *prefix.last().unwrap();
            let nb = dp.graph.neighbours(last);
            let child_prob = prob / nb.len() as f64;
            let children: Vec<f64> = nb
                .iter()
                .map(|&c| {
                    prefix.push(c);
                    let v = walk(dp, prefix, child_prob, exponent, acc);
                    prefix.pop();
                    v
                })
                .collect();
            dp.mode.combine(&children)
        };
        acc[depth] += q.powf(exponent) * prob;
        q
    }
    walk(&dp, &mut vec![u], 1.0, exponent, &mut acc);
    Ok(acc)
}
