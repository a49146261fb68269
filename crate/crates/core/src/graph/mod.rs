//! Graph representations: simple undirected graphs, weighted multigraphs
//! (the result of contracting a vertex set), and vertex sets.
//!
//! Vertex ids are dense integers `0..n`.

mod generators;
mod io;

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{CrwError, Result};

pub use generators::*;
pub use io::GraphFile;

/// Product structure of a torus `Z_k^d` or grid `[k]^d`.
///
/// Vertex `v` has coordinates `c_i = (v / k^i) % k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub side: usize,
    pub dims: usize,
    pub wrap: bool,
}

impl Lattice {
    pub fn coords(&self, v: usize) -> Vec<usize> {
        let mut rest = v;
        (0..self.dims)
            .map(|_| {
                let c = rest % self.side;
                rest /= self.side;
                c
            })
            .collect()
    }

    pub fn vertex(&self, coords: &[usize]) -> usize {
        coords.iter().rev().fold(0, |acc, &c| acc * self.side + c)
    }

    /// Distance between two coordinates along one axis (cyclic on a torus).
    pub fn axis_gap(&self, from: usize, to: usize) -> usize {
        let raw = from.abs_diff(to);
        if self.wrap {
            raw.min(self.side - raw)
        } else {
            raw
        }
    }
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
    lattice: Option<Lattice>,
}

impl Graph {
    /// Builds a simple graph, rejecting loops, duplicate edges and bad ids.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(CrwError::InvalidGraph("graph has no vertices".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(CrwError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(CrwError::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(CrwError::InvalidGraph(format!("duplicate edge at {v}")));
            }
        }
        Ok(Self {
            adj,
            edge_count: edges.len(),
            lattice: None,
        })
    }

    pub(crate) fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice = Some(lattice);
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(Option::is_some)
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count + 1 == self.n() && self.is_connected()
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(CrwError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        self.bfs_from_set(&[source])
    }

    /// Multi-source BFS; entry `v` is the distance from `v` to the nearest source.
    pub fn bfs_from_set(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS distances on a graph known to be connected.
    pub fn distances_connected(&self, source: usize) -> Result<Vec<usize>> {
        self.bfs_distances(source)
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or(CrwError::Disconnected)
    }

    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(CrwError::Disconnected)
        }
    }
}

/// A set of vertex ids of some graph, kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(n: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = ids.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= n) {
            return Err(CrwError::VertexOutOfRange { vertex: bad, n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { members })
    }

    pub fn singleton(v: usize) -> Self {
        Self { members: vec![v] }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut out = vec![false; n];
        for &v in &self.members {
            out[v] = true;
        }
        out
    }

    /// Bitmask form; only defined for ids below 32.
    pub fn to_mask(&self) -> Option<u32> {
        self.members
            .iter()
            .try_fold(0u32, |m, &v| (v < 32).then(|| m | (1 << v)))
    }

    /// Parses `"0,3,5"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let ids = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|e| CrwError::Parse(format!("vertex id {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, ids)
    }
}

/// One edge record of a [`WeightedMultigraph`]. `u == v` is a loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub multiplicity: usize,
}

/// Undirected multigraph with positive edge weights; loops allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMultigraph {
    n: usize,
    edges: Vec<MultiEdge>,
}

impl WeightedMultigraph {
    pub fn new(n: usize, edges: Vec<MultiEdge>) -> Result<Self> {
        for e in &edges {
            for x in [e.u, e.v] {
                if x >= n {
                    return Err(CrwError::VertexOutOfRange { vertex: x, n });
                }
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(CrwError::InvalidGraph(format!(
                    "edge {}-{} has non-positive weight {}",
                    e.u, e.v, e.weight
                )));
            }
            if e.multiplicity == 0 {
                return Err(CrwError::InvalidGraph(format!(
                    "edge {}-{} has zero multiplicity",
                    e.u, e.v
                )));
            }
        }
        Ok(Self { n, edges })
    }

    /// Weighted copy of a simple graph; `weight(u, v)` is called with `u < v`.
    pub fn from_graph(g: &Graph, mut weight: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let edges = g
            .edges()
            .map(|(u, v)| MultiEdge {
                u,
                v,
                weight: weight(u, v),
                multiplicity: 1,
            })
            .collect();
        Self::new(g.n(), edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[MultiEdge] {
        &self.edges
    }

    /// `w(G)`: the sum of weight × multiplicity over edge records.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight * e.multiplicity as f64).sum()
    }

    /// Total multiplicity, loops counted once.
    pub fn edge_multiplicity(&self) -> usize {
        self.edges.iter().map(|e| e.multiplicity).sum()
    }

    /// Number of edge half-slots at each vertex; a loop contributes two.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += e.multiplicity;
            deg[e.v] += e.multiplicity;
        }
        deg
    }
}

/// Result of contracting a vertex set to a single vertex.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: WeightedMultigraph,
    /// `map[v]` is the id of original vertex `v` in the contracted graph.
    pub map: Vec<usize>,
    /// Id of the merged vertex (always the last one).
    pub merged: usize,
}

/// Contracts `set` to one vertex, keeping parallel edges as multiplicities
/// and turning edges inside `set` into loops. Unit weights.
pub fn contract(g: &Graph, set: &VertexSet) -> Result<Contraction> {
    if set.is_empty() {
        return Err(CrwError::param("contracted set is empty"));
    }
    if let Some(&bad) = set.as_slice().iter().find(|&&v| v >= g.n()) {
        return Err(CrwError::VertexOutOfRange { vertex: bad, n: g.n() });
    }
    if set.len() == g.n() {
        return Err(CrwError::param("contracted set must be a proper subset"));
    }
    let merged = g.n() - set.len();
    let mut map = vec![0; g.n()];
    let mut next = 0;
    for (v, slot) in map.iter_mut().enumerate() {
        if set.contains(v) {
            *slot = merged;
        } else {
            *slot = next;
            next += 1;
        }
    }
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (map[u], map[v]);
        *counts.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    let edges = counts
        .into_iter()
        .map(|((u, v), multiplicity)| MultiEdge {
            u,
            v,
            weight: 1.0,
            multiplicity,
        })
        .collect();
    Ok(Contraction {
        graph: WeightedMultigraph::new(merged + 1, edges)?,
        map,
        merged,
    })
}
