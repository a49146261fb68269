use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Graph, Lattice};
use crate::error::{CrwError, Result};
use crate::rng::RngStream;

/// Resampling budget for random families that must come out connected/simple.
pub const RESAMPLE_BUDGET: usize = 1000;

pub fn gen_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(CrwError::param(format!("path needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges)
}

pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(CrwError::param(format!("simple cycle needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn gen_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(CrwError::param(format!("complete graph needs n >= 2, got {n}")));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges)
}

/// The bull: a triangle `{1, 2, 3}` with pendant vertices `0` (on 1) and `4` (on 3).
pub fn gen_bull() -> Graph {
    Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).expect("bull is simple")
}

fn lattice(side: usize, dims: usize, wrap: bool) -> Result<Graph> {
    if dims == 0 {
        return Err(CrwError::param("dimension must be >= 1"));
    }
    let n = side
        .checked_pow(dims as u32)
        .ok_or_else(|| CrwError::param("k^d overflows"))?;
    let lat = Lattice { side, dims, wrap };
    let mut edges = Vec::new();
    for v in 0..n {
        let coords = lat.coords(v);
        for axis in 0..dims {
            let c = coords[axis];
            let up = if c + 1 < side {
                Some(c + 1)
            } else if wrap {
                Some(0)
            } else {
                None
            };
            if let Some(next) = up {
                let mut other = coords.clone();
                other[axis] = next;
                edges.push((v, lat.vertex(&other)));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges)?.with_lattice(lat))
}

/// Discrete torus `Z_k^d`. `k = 2` is rejected: it would need parallel edges.
pub fn gen_torus(k: usize, d: usize) -> Result<Graph> {
    if k < 3 {
        return Err(CrwError::param(format!("torus needs k >= 3, got {k}")));
    }
    lattice(k, d, true)
}

pub fn gen_grid(k: usize, d: usize) -> Result<Graph> {
    if k < 2 {
        return Err(CrwError::param(format!("grid needs k >= 2, got {k}")));
    }
    lattice(k, d, false)
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex of
/// degree below `dmax`.
pub fn gen_random_tree(n: usize, dmax: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(CrwError::param(format!("tree needs n >= 2, got {n}")));
    }
    if dmax < 2 {
        return Err(CrwError::param(format!("tree needs dmax >= 2, got {dmax}")));
    }
    let mut rng = RngStream::new(seed, 0);
    let mut deg = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n - 1);
    for v in 1..n {
        let k = rng.random_range(0..open.len());
        let u = open[k];
        edges.push((u, v));
        deg[u] += 1;
        deg[v] = 1;
        if deg[u] == dmax {
            open.swap_remove(k);
        }
        open.push(v);
    }
    Graph::from_edges(n, &edges)
}

/// Uniform-ish random `d`-regular graph by the pairing model, resampled
/// until simple and connected.
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d == 0 || d >= n || (n * d) % 2 == 1 {
        return Err(CrwError::param(format!(
            "no connected simple {d}-regular graph on {n} vertices"
        )));
    }
    if d == 1 && n > 2 {
        return Err(CrwError::param(
            "1-regular graphs on more than 2 vertices are disconnected",
        ));
    }
    let mut rng = RngStream::new(seed, 0);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..RESAMPLE_BUDGET {
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(CrwError::RetryBudgetExhausted(RESAMPLE_BUDGET))
}

/// Erdős–Rényi `G(n, p)` conditioned on connectivity by resampling.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(CrwError::param(format!("G(n,p) needs n >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(CrwError::param(format!("p must lie in (0, 1], got {p}")));
    }
    let mut rng = RngStream::new(seed, 0);
    for _ in 0..RESAMPLE_BUDGET {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(CrwError::RetryBudgetExhausted(RESAMPLE_BUDGET))
}

/// Connected graph of maximum degree at most 3: a random tree with `dmax = 3`
/// plus up to `extra` random edges between vertices of degree below 3.
pub fn gen_random_subcubic(n: usize, extra: usize, seed: u64) -> Result<Graph> {
    let tree = gen_random_tree(n, 3, seed)?;
    let mut rng = RngStream::new(seed, 1);
    let mut edges: BTreeSet<(usize, usize)> = tree.edges().collect();
    let mut deg: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut added = 0;
    for _ in 0..extra * 20 {
        if added == extra {
            break;
        }
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        let key = (u.min(v), u.max(v));
        if u == v || deg[u] >= 3 || deg[v] >= 3 || edges.contains(&key) {
            continue;
        }
        edges.insert(key);
        deg[u] += 1;
        deg[v] += 1;
        added += 1;
    }
    let edges: Vec<_> = edges.into_iter().collect();
    Graph::from_edges(n, &edges)
}
