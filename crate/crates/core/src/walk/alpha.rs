//! Preference tables `α_v(i, j)`: the probability that a walker at `v`
//! offered `{i, j}` moves to `i`.
//!
//! Each unordered neighbour pair is stored once with the complement implied,
//! so `α_v(j, i) = 1 − α_v(i, j)` holds by construction and `α_v(i, i) = 1/2`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CrwError, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
struct AlphaRow {
    nbrs: Vec<usize>,
    // α(nbrs[a], nbrs[b]) for a < b, row-major upper triangle.
    upper: Vec<f64>,
}

impl AlphaRow {
    fn new(nbrs: Vec<usize>, fill: f64) -> Self {
        let d = nbrs.len();
        Self {
            nbrs,
            upper: vec![fill; d * d.saturating_sub(1) / 2],
        }
    }

    fn slot(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < b);
        let d = self.nbrs.len();
        a * d - a * (a + 1) / 2 + (b - a - 1)
    }

    fn position(&self, v: usize) -> Option<usize> {
        self.nbrs.binary_search(&v).ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyTable {
    rows: Vec<AlphaRow>,
}

impl StrategyTable {
    /// Uniform table (`α ≡ 1/2`) over the given neighbour lists, which must be
    /// sorted and free of duplicates.
    pub fn uniform_on(neighbours: &[Vec<usize>]) -> Self {
        Self {
            rows: neighbours.iter().map(|nb| AlphaRow::new(nb.clone(), 0.5)).collect(),
        }
    }

    /// The table of the simple random walk on `g`.
    pub fn uniform(g: &Graph) -> Self {
        Self::uniform_on(g.adjacency())
    }

    /// Builds a table from `f(v, i, j)` evaluated on every pair `i < j` of neighbours.
    pub fn from_fn(neighbours: &[Vec<usize>], mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut table = Self::uniform_on(neighbours);
        for (v, row) in table.rows.iter_mut().enumerate() {
            let d = row.nbrs.len();
            for a in 0..d {
                for b in a + 1..d {
                    let value = f(v, row.nbrs[a], row.nbrs[b]);
                    check_unit(v, value)?;
                    let s = row.slot(a, b);
                    row.upper[s] = value;
                }
            }
        }
        Ok(table)
    }

    /// Deterministic table from a rank function: lower rank is preferred,
    /// equal ranks are tied at `1/2`.
    pub fn from_rank<R: Ord>(neighbours: &[Vec<usize>], mut rank: impl FnMut(usize, usize) -> R) -> Self {
        Self::from_fn(neighbours, |v, i, j| match rank(v, i).cmp(&rank(v, j)) {
            std::cmp::Ordering::Less => 1.0,
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Greater => 0.0,
        })
        .expect("rank tables only hold 0, 1/2, 1")
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.rows[v].nbrs
    }

    /// `α_v(i, j)`, or `None` if `i` or `j` is not a neighbour of `v`.
    pub fn alpha(&self, v: usize, i: usize, j: usize) -> Option<f64> {
        let row = self.rows.get(v)?;
        let a = row.position(i)?;
        let b = row.position(j)?;
        Some(match a.cmp(&b) {
            std::cmp::Ordering::Equal => 0.5,
            std::cmp::Ordering::Less => row.upper[row.slot(a, b)],
            std::cmp::Ordering::Greater => 1.0 - row.upper[row.slot(b, a)],
        })
    }

    pub fn set_alpha(&mut self, v: usize, i: usize, j: usize, value: f64) -> Result<()> {
        check_unit(v, value)?;
        let row = self
            .rows
            .get_mut(v)
            .ok_or_else(|| CrwError::AlphaMismatch(format!("vertex {v} out of range")))?;
        let (a, b) = match (row.position(i), row.position(j)) {
            (Some(a), Some(b)) if a != b => (a, b),
            _ => {
                return Err(CrwError::AlphaMismatch(format!(
                    "{{{i}, {j}}} is not a pair of distinct neighbours of {v}"
                )))
            }
        };
        if a < b {
            let s = row.slot(a, b);
            row.upper[s] = value;
        } else {
            let s = row.slot(b, a);
            row.upper[s] = 1.0 - value;
        }
        Ok(())
    }

    /// Pairs `(i, j, α_v(i, j))` with `i < j`.
    pub fn pairs(&self, v: usize) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let row = &self.rows[v];
        let d = row.nbrs.len();
        (0..d).flat_map(move |a| (a + 1..d).map(move |b| (row.nbrs[a], row.nbrs[b], row.upper[row.slot(a, b)])))
    }

    pub fn to_file(&self) -> StrategyFile {
        StrategyFile {
            n: self.n(),
            vertices: (0..self.n())
                .map(|v| VertexAlphas {
                    vertex: v,
                    neighbours: self.neighbours(v).to_vec(),
                    pairs: self
                        .pairs(v)
                        .map(|(i, j, alpha)| PairAlpha { pair: [i, j], alpha })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StrategyFile = serde_json::from_str(text)?;
        file.to_table()
    }
}

fn check_unit(v: usize, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(CrwError::AlphaMismatch(format!(
            "alpha {value} at vertex {v} outside [0, 1]"
        )))
    }
}

/// JSON layout: one entry per vertex listing `{pair: [i, j], alpha}` for `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyFile {
    pub n: usize,
    pub vertices: Vec<VertexAlphas>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexAlphas {
    pub vertex: usize,
    pub neighbours: Vec<usize>,
    pub pairs: Vec<PairAlpha>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairAlpha {
    pub pair: [usize; 2],
    pub alpha: f64,
}

impl StrategyFile {
    pub fn to_table(&self) -> Result<StrategyTable> {
        if self.vertices.len() != self.n {
            return Err(CrwError::Parse("vertex entries do not match n".into()));
        }
        let mut neighbours = vec![Vec::new(); self.n];
        for entry in &self.vertices {
            let slot = neighbours.get_mut(entry.vertex).ok_or(CrwError::VertexOutOfRange {
                vertex: entry.vertex,
                n: self.n,
            })?;
            let mut nb = entry.neighbours.clone();
            nb.sort_unstable();
            nb.dedup();
            *slot = nb;
        }
        let mut table = StrategyTable::uniform_on(&neighbours);
        for entry in &self.vertices {
            for p in &entry.pairs {
                table.set_alpha(entry.vertex, p.pair[0], p.pair[1], p.alpha)?;
            }
        }
        Ok(table)
    }
}

/// Transition probability to the rank-`r` neighbour (1-based) of a degree-`d`
/// vertex under a strict preference order: `(2(d − r) + 1) / d²`.
pub fn rank_probability(d: usize, r: usize) -> Result<f64> {
    if d == 0 || r == 0 || r > d {
        return Err(CrwError::param(format!("rank {r} out of range for degree {d}")));
    }
    Ok((2 * (d - r) + 1) as f64 / (d * d) as f64)
}

/// Per-vertex tiered ranking of the neighbourhood: earlier tiers are strictly
/// preferred, members of one tier are tied.
pub type TieredOrder = Vec<Vec<usize>>;

pub fn alpha_from_ordering(g: &Graph, order: &[TieredOrder]) -> Result<StrategyTable> {
    if order.len() != g.n() {
        return Err(CrwError::param("one tiered order per vertex is required"));
    }
    let mut tier_of: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(g.n());
    for (v, tiers) in order.iter().enumerate() {
        let mut map = BTreeMap::new();
        for (t, tier) in tiers.iter().enumerate() {
            for &u in tier {
                if !g.has_edge(v, u) {
                    return Err(CrwError::AlphaMismatch(format!("{u} is not a neighbour of {v}")));
                }
                if map.insert(u, t).is_some() {
                    return Err(CrwError::param(format!("{u} ranked twice at {v}")));
                }
            }
        }
        if map.len() != g.degree(v) {
            return Err(CrwError::param(format!("order at {v} omits a neighbour")));
        }
        tier_of.push(map);
    }
    Ok(StrategyTable::from_rank(g.adjacency(), |v, u| tier_of[v][&u]))
}

/// Strict preference by position in a global vertex order (earlier is better).
pub fn alpha_from_global_order(neighbours: &[Vec<usize>], order: &[usize]) -> StrategyTable {
    let mut pos = vec![usize::MAX; neighbours.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    StrategyTable::from_rank(neighbours, |_, u| pos[u])
}

/// Cross-choice probability of taking the light option when heavy options
/// must be twice as likely: `b / (2(a + 2b))`.
pub fn mixed_partition_p(a: usize, b: usize) -> f64 {
    if a + b == 0 {
        return 0.5;
    }
    b as f64 / (2.0 * (a + 2 * b) as f64)
}

/// Strategy under which every neighbour in `heavy[v]` is twice as likely as
/// every other neighbour of `v`.
pub fn mixed_partition_alpha(g: &Graph, heavy: &[Vec<usize>]) -> Result<StrategyTable> {
    if heavy.len() != g.n() {
        return Err(CrwError::param("one heavy set per vertex is required"));
    }
    let mut is_heavy = vec![Vec::new(); g.n()];
    let mut p = vec![0.5; g.n()];
    for v in 0..g.n() {
        let flags: Vec<bool> = g.neighbours(v).iter().map(|u| heavy[v].contains(u)).collect();
        if let Some(&u) = heavy[v].iter().find(|&&u| !g.has_edge(v, u)) {
            return Err(CrwError::AlphaMismatch(format!("{u} is not a neighbour of {v}")));
        }
        let b = flags.iter().filter(|&&h| h).count();
        p[v] = mixed_partition_p(g.degree(v) - b, b);
        is_heavy[v] = flags;
    }
    StrategyTable::from_fn(g.adjacency(), |v, i, j| {
        let nb = g.neighbours(v);
        let hi = is_heavy[v][nb.binary_search(&i).unwrap()];
        let hj = is_heavy[v][nb.binary_search(&j).unwrap()];
        match (hi, hj) {
            (false, true) => p[v],
            (true, false) => 1.0 - p[v],
            _ => 0.5,
        }
    })
}

/// Symmetric edge weights keyed by `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeWeights {
    map: BTreeMap<(usize, usize), f64>,
}

impl EdgeWeights {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_fn(g: &Graph, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut w = Self::new();
        for (u, v) in g.edges() {
            w.set(u, v, f(u, v));
        }
        w
    }

    pub fn set(&mut self, u: usize, v: usize, weight: f64) {
        self.map.insert((u.min(v), u.max(v)), weight);
    }

    pub fn get(&self, u: usize, v: usize) -> Option<f64> {
        self.map.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.map.iter().map(|(&k, &w)| (k, w))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.map.values().sum()
    }
}

const RATIO_TOL: f64 = 1e-9;

/// Strategy whose CRW moves along incident edges proportionally to `w`.
///
/// Requires the incident weights at every vertex to take at most two values,
/// the larger exactly twice the smaller.
pub fn alpha_for_weighting(g: &Graph, w: &EdgeWeights) -> Result<StrategyTable> {
    let mut heavy = vec![Vec::new(); g.n()];
    for v in 0..g.n() {
        let mut incident = Vec::with_capacity(g.degree(v));
        for &u in g.neighbours(v) {
            let x = w.get(v, u).ok_or_else(|| CrwError::WeightingNotEmulable {
                vertex: v,
                reason: format!("edge {v}-{u} has no weight"),
            })?;
            if !(x > 0.0 && x.is_finite()) {
                return Err(CrwError::WeightingNotEmulable {
                    vertex: v,
                    reason: format!("edge {v}-{u} has weight {x}"),
                });
            }
            incident.push((u, x));
        }
        let Some(low) = incident.iter().map(|&(_, x)| x).reduce(f64::min) else {
            continue;
        };
        for &(u, x) in &incident {
            let ratio = x / low;
            if (ratio - 2.0).abs() <= RATIO_TOL {
                heavy[v].push(u);
            } else if (ratio - 1.0).abs() > RATIO_TOL {
                return Err(CrwError::WeightingNotEmulable {
                    vertex: v,
                    reason: format!("incident weight ratio {ratio} is neither 1 nor 2"),
                });
            }
        }
    }
    mixed_partition_alpha(g, &heavy)
}
