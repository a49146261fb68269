//! Exact one-step transition probabilities.

use nalgebra::DMatrix;

use super::alpha::StrategyTable;
use crate::error::{CrwError, Result};
use crate::graph::{Graph, WeightedMultigraph};

/// Choice structure at each vertex: distinct neighbours with the number of
/// edge half-slots leading to each. A simple graph has every count equal to 1;
/// a multigraph counts parallel edges, and a loop gives its vertex two slots.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceGraph {
    neighbours: Vec<Vec<usize>>,
    counts: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

impl ChoiceGraph {
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            neighbours: g.adjacency().to_vec(),
            counts: g.adjacency().iter().map(|nb| vec![1; nb.len()]).collect(),
            degree: (0..g.n()).map(|v| g.degree(v)).collect(),
        }
    }

    pub fn from_multigraph(m: &WeightedMultigraph) -> Self {
        let mut slots = vec![std::collections::BTreeMap::<usize, usize>::new(); m.n()];
        for e in m.edges() {
            *slots[e.u].entry(e.v).or_default() += e.multiplicity;
            *slots[e.v].entry(e.u).or_default() += e.multiplicity;
        }
        let neighbours = slots.iter().map(|s| s.keys().copied().collect()).collect();
        let counts: Vec<Vec<usize>> = slots.iter().map(|s| s.values().copied().collect()).collect();
        let degree = counts.iter().map(|c| c.iter().sum()).collect();
        Self {
            neighbours,
            counts,
            degree,
        }
    }

    pub fn n(&self) -> usize {
        self.neighbours.len()
    }

    /// Distinct neighbours of `v` (may include `v` itself through a loop).
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.neighbours
    }

    /// Slot count for each entry of [`neighbours`](Self::neighbours).
    pub fn counts(&self, v: usize) -> &[usize] {
        &self.counts[v]
    }

    /// Number of half-slots at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    /// `q_i = 2 c_i Σ_j c_j α(i, j) / d²` for each distinct neighbour `i` of `v`.
    pub fn crw_row(&self, v: usize, alpha: &StrategyTable) -> Result<Vec<f64>> {
        let nb = &self.neighbours[v];
        if alpha.neighbours(v) != nb.as_slice() {
            return Err(CrwError::AlphaMismatch(format!(
                "strategy neighbourhood of {v} differs from the graph"
            )));
        }
        let c = &self.counts[v];
        let d2 = (self.degree[v] * self.degree[v]) as f64;
        Ok((0..nb.len())
            .map(|a| {
                let s: f64 = (0..nb.len())
                    .map(|b| c[b] as f64 * alpha.alpha(v, nb[a], nb[b]).unwrap())
                    .sum();
                2.0 * c[a] as f64 * s / d2
            })
            .collect())
    }

    /// CRW transition probabilities from a strict order given by `rank`
    /// (lower is better, no ties). Used by the exact solvers, where the order
    /// comes from hitting values.
    pub fn ordered_row(&self, v: usize, rank: impl Fn(usize) -> usize) -> Vec<f64> {
        let nb = &self.neighbours[v];
        let c = &self.counts[v];
        let mut idx: Vec<usize> = (0..nb.len()).collect();
        idx.sort_by_key(|&a| rank(nb[a]));
        let d2 = (self.degree[v] * self.degree[v]) as f64;
        let mut q = vec![0.0; nb.len()];
        // walk from worst to best: `worse` counts slots ranked below
        let mut worse = 0usize;
        for a in idx.into_iter().rev() {
            let upto = worse + c[a];
            q[a] = (upto * upto - worse * worse) as f64 / d2;
            worse = upto;
        }
        q
    }

    fn dense(&self, kind: TransitionKind, mut row: impl FnMut(usize) -> Result<Vec<f64>>) -> Result<TransitionMatrix> {
        let n = self.n();
        let mut data = vec![0.0; n * n];
        for v in 0..n {
            for (&u, p) in self.neighbours[v].iter().zip(row(v)?) {
                data[v * n + u] += p;
            }
        }
        Ok(TransitionMatrix { n, data, kind })
    }

    pub fn crw_matrix(&self, alpha: &StrategyTable) -> Result<TransitionMatrix> {
        if alpha.n() != self.n() {
            return Err(CrwError::AlphaMismatch(format!(
                "strategy has {} vertices, graph has {}",
                alpha.n(),
                self.n()
            )));
        }
        self.dense(TransitionKind::Crw, |v| self.crw_row(v, alpha))
    }

    pub fn srw_matrix(&self) -> TransitionMatrix {
        self.dense(TransitionKind::Srw, |v| {
            let d = self.degree[v] as f64;
            Ok(self.counts[v].iter().map(|&c| c as f64 / d).collect())
        })
        .expect("srw rows cannot fail")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TransitionKind {
    Crw,
    Srw,
    LazySrw,
    /// Walk on an edge-weighted graph.
    Weighted,
}

/// Dense row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    data: Vec<f64>,
    kind: TransitionKind,
}

impl TransitionMatrix {
    pub fn srw(g: &Graph) -> Self {
        ChoiceGraph::from_graph(g).srw_matrix()
    }

    /// Lazy walk: stay with probability 1/2, otherwise an SRW step.
    pub fn lazy_srw(g: &Graph) -> Self {
        let mut m = Self::srw(g);
        for x in &mut m.data {
            *x *= 0.5;
        }
        for v in 0..m.n {
            m.data[v * m.n + v] += 0.5;
        }
        m.kind = TransitionKind::LazySrw;
        m
    }

    /// Dense matrix from square rows; each row must sum to 1 within 1e-12.
    pub fn from_rows(rows: Vec<Vec<f64>>, kind: TransitionKind) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (v, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(CrwError::param(format!("row {v} has length {}", row.len())));
            }
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) || (row.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(CrwError::param(format!("row {v} is not a probability vector")));
            }
            data.extend(row);
        }
        Ok(Self { n, data, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether every state reaches every other through positive entries.
    pub fn is_irreducible(&self) -> bool {
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for u in 0..self.n {
                    let p = if forward { self.get(v, u) } else { self.get(u, v) };
                    if p > 0.0 && !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        self.n > 0 && reach(true) && reach(false)
    }

    pub fn kind(&self) -> TransitionKind {
        self.kind
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.data[from * self.n + to]
    }

    pub fn row(&self, from: usize) -> &[f64] {
        &self.data[from * self.n..(from + 1) * self.n]
    }

    /// Largest deviation of a row sum from 1.
    pub fn row_sum_error(&self) -> f64 {
        (0..self.n)
            .map(|v| (self.row(v).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// One step of a distribution: returns `μP`.
    pub fn advance(&self, mu: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (v, &m) in mu.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(self.row(v)) {
                *o += m * p;
            }
        }
        out
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

/// Exact CRW transition matrix of the strategy `alpha` on `g`.
pub fn transitions_from_alpha(g: &Graph, alpha: &StrategyTable) -> Result<TransitionMatrix> {
    ChoiceGraph::from_graph(g).crw_matrix(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{contract, gen_bull, gen_complete, VertexSet};
    use crate::walk::alpha::{alpha_from_global_order, alpha_from_ordering, rank_probability};
    use proptest::prelude::*;

    // Independent oracle: enumerate all d² ordered choice pairs.
    fn brute_row(g: &Graph, alpha: &StrategyTable, v: usize) -> Vec<(usize, f64)> {
        let nb = g.neighbours(v);
        let d2 = (nb.len() * nb.len()) as f64;
        nb.iter()
            .map(|&i| {
                let mut p = 0.0;
                for &c1 in nb {
                    for &c2 in nb {
                        if c1 == c2 {
                            p += if c1 == i { 1.0 } else { 0.0 };
                        } else if c1 == i {
                            p += alpha.alpha(v, c1, c2).unwrap();
                        } else if c2 == i {
                            p += alpha.alpha(v, c2, c1).unwrap();
                        }
                    }
                }
                (i, p / d2)
            })
            .collect()
    }

    fn star(d: usize) -> Graph {
        let edges: Vec<_> = (1..=d).map(|i| (0, i)).collect();
        Graph::from_edges(d + 1, &edges).unwrap()
    }

    #[test]
    fn uniform_alpha_gives_srw() {
        let g = gen_bull();
        let m = transitions_from_alpha(&g, &StrategyTable::uniform(&g)).unwrap();
        let srw = TransitionMatrix::srw(&g);
        for v in 0..5 {
            for u in 0..5 {
                assert!((m.get(v, u) - srw.get(v, u)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degree_three_preferred_and_avoided() {
        let g = star(3);
        let always_1 = alpha_from_ordering(
            &g,
            &[vec![vec![1], vec![2, 3]], vec![vec![0]], vec![vec![0]], vec![vec![0]]],
        )
        .unwrap();
        let m = transitions_from_alpha(&g, &always_1).unwrap();
        assert!((m.get(0, 1) - 5.0 / 9.0).abs() < 1e-15);
        assert!((m.get(0, 2) - 2.0 / 9.0).abs() < 1e-15);
        let never_1 = alpha_from_ordering(
            &g,
            &[vec![vec![2, 3], vec![1]], vec![vec![0]], vec![vec![0]], vec![vec![0]]],
        )
        .unwrap();
        let m = transitions_from_alpha(&g, &never_1).unwrap();
        assert!((m.get(0, 1) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn strict_order_matches_brute_force_and_rank_formula() {
        let g = star(3);
        let t = alpha_from_global_order(g.adjacency(), &[3, 1, 2, 0]);
        let m = transitions_from_alpha(&g, &t).unwrap();
        for (i, p) in brute_row(&g, &t, 0) {
            assert!((m.get(0, i) - p).abs() < 1e-15);
        }
        assert!((m.get(0, 3) - 5.0 / 9.0).abs() < 1e-15);
        assert!((m.get(0, 1) - 3.0 / 9.0).abs() < 1e-15);
        assert!((m.get(0, 2) - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn two_tier_best_gets_seven_sixteenths() {
        let g = star(4);
        let mut order = vec![vec![vec![0]]; 5];
        order[0] = vec![vec![2], vec![1, 3, 4]];
        let m = transitions_from_alpha(&g, &alpha_from_ordering(&g, &order).unwrap()).unwrap();
        assert!((m.get(0, 2) - 7.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn first_and_last_choice_ratios() {
        for d in 2..=50 {
            let q_best = rank_probability(d, 1).unwrap();
            let q_mid = (1.0 - q_best) / (d - 1) as f64;
            let ratio = q_mid / q_best;
            assert!((ratio - (d - 1) as f64 / (2 * d - 1) as f64).abs() < 1e-14);
            assert!(ratio < 0.5);
            let q_last = rank_probability(d, d).unwrap();
            assert!((q_last / q_best - 1.0 / (2 * d - 1) as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn ordered_row_matches_crw_row_on_multigraph() {
        let g = gen_complete(5).unwrap();
        let c = contract(&g, &VertexSet::new(5, [0, 1]).unwrap()).unwrap();
        let cg = ChoiceGraph::from_multigraph(&c.graph);
        let order = [3usize, 0, 2, 1];
        let mut rank = [0usize; 4];
        for (k, &v) in order.iter().enumerate() {
            rank[v] = k;
        }
        let table = alpha_from_global_order(cg.adjacency(), &order);
        for v in 0..4 {
            let a = cg.crw_row(v, &table).unwrap();
            let b = cg.ordered_row(v, |u| rank[u]);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-14);
            }
            assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
        // the merged vertex has 2 loop slots and 2 slots to each other vertex
        assert_eq!(cg.degree(3), 8);
    }

    #[test]
    fn mixed_partition_oracle() {
        use crate::walk::alpha::{alpha_for_weighting, mixed_partition_alpha, EdgeWeights};
        // a = 1, b = 1: star with leaves 1 (light) and 2 (heavy)
        let g = star(2);
        let t = mixed_partition_alpha(&g, &[vec![2], vec![], vec![]]).unwrap();
        assert!((t.alpha(0, 1, 2).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let row: Vec<_> = brute_row(&g, &t, 0);
        assert!((row[0].1 - 1.0 / 3.0).abs() < 1e-15);
        assert!((row[1].1 - 2.0 / 3.0).abs() < 1e-15);

        let mut w = EdgeWeights::new();
        w.set(0, 1, 1.0);
        w.set(0, 2, 2.0);
        assert_eq!(alpha_for_weighting(&g, &w).unwrap(), t);

        // every (a, b) split reproduces 1/(a+2b) and 2/(a+2b)
        for d in 1..=7 {
            let g = star(d);
            for b in 0..=d {
                let mut heavy = vec![vec![]; d + 1];
                heavy[0] = (1..=b).collect();
                let t = mixed_partition_alpha(&g, &heavy).unwrap();
                let z = (d - b + 2 * b) as f64;
                for (i, p) in brute_row(&g, &t, 0) {
                    let want = if i <= b { 2.0 / z } else { 1.0 / z };
                    assert!((p - want).abs() < 1e-14, "d={d} b={b} i={i}");
                }
            }
        }
    }

    #[test]
    fn lazy_walk_rows() {
        let g = gen_bull();
        let m = TransitionMatrix::lazy_srw(&g);
        assert_eq!(m.kind(), TransitionKind::LazySrw);
        assert!(m.row_sum_error() < 1e-12);
        assert!((m.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((m.get(0, 1) - 0.5).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn random_tables_are_stochastic(seed in any::<u64>(), vals in proptest::collection::vec(0.0f64..=1.0, 64)) {
            let g = crate::graph::gen_gnp(8, 0.5, seed % 50).unwrap();
            let mut k = 0;
            let t = StrategyTable::from_fn(g.adjacency(), |_, _, _| { k += 1; vals[k % 64] }).unwrap();
            let m = transitions_from_alpha(&g, &t).unwrap();
            prop_assert!(m.row_sum_error() <= 1e-12);
            for v in 0..8 {
                for (i, p) in brute_row(&g, &t, v) {
                    prop_assert!((m.get(v, i) - p).abs() < 1e-14);
                }
                for u in 0..8 {
                    if !g.has_edge(v, u) {
                        prop_assert_eq!(m.get(v, u), 0.0);
                    }
                }
            }
        }
    }
}
