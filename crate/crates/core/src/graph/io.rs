//! Edge-list text and JSON graph files.
//!
//! Edge list: first line `n m`, then `m` lines `u v`.
//! JSON: `{"n": .., "edges": [[u, v], ..], "weights"?: [..], "multiplicities"?: [..], "lattice"?: {..}}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Graph, Lattice, MultiEdge, WeightedMultigraph};
use crate::error::{CrwError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Lattice>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        Self {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
            weights: None,
            multiplicities: None,
            lattice: g.lattice().copied(),
        }
    }

    pub fn from_multigraph(m: &WeightedMultigraph) -> Self {
        Self {
            n: m.n(),
            edges: m.edges().iter().map(|e| [e.u, e.v]).collect(),
            weights: Some(m.edges().iter().map(|e| e.weight).collect()),
            multiplicities: Some(m.edges().iter().map(|e| e.multiplicity).collect()),
            lattice: None,
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        if self.multiplicities.as_ref().is_some_and(|m| m.iter().any(|&k| k != 1)) {
            return Err(CrwError::InvalidGraph(
                "file holds parallel edges; load it as a multigraph".into(),
            ));
        }
        let edges: Vec<_> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(self.n, &edges)?;
        Ok(match self.lattice {
            Some(l) if l.side.checked_pow(l.dims as u32) == Some(self.n) => g.with_lattice(l),
            Some(_) => return Err(CrwError::InvalidGraph("lattice metadata does not match n".into())),
            None => g,
        })
    }

    pub fn to_multigraph(&self) -> Result<WeightedMultigraph> {
        let m = self.edges.len();
        for (name, len) in [
            ("weights", self.weights.as_ref().map(Vec::len)),
            ("multiplicities", self.multiplicities.as_ref().map(Vec::len)),
        ] {
            if len.is_some_and(|l| l != m) {
                return Err(CrwError::InvalidGraph(format!("{name} length differs from edges")));
            }
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| MultiEdge {
                u: e[0],
                v: e[1],
                weight: self.weights.as_ref().map_or(1.0, |w| w[i]),
                multiplicity: self.multiplicities.as_ref().map_or(1, |k| k[i]),
            })
            .collect();
        WeightedMultigraph::new(self.n, edges)
    }
}

impl Graph {
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| CrwError::Parse("empty edge list".into()))?;
        let [n, m] = parse_pair(header)?;
        let edges = lines
            .map(|l| parse_pair(l).map(|[u, v]| (u, v)))
            .collect::<Result<Vec<_>>>()?;
        if edges.len() != m {
            return Err(CrwError::Parse(format!(
                "header announces {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&GraphFile::from_graph(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<GraphFile>(text)?.to_graph()
    }

    /// Loads `.json` files as JSON and anything else as an edge list.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        if is_json(path) {
            Self::from_json(&text)
        } else {
            Self::from_edge_list(&text)
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = if is_json(path) {
            self.to_json()?
        } else {
            self.to_edge_list()
        };
        fs::write(path, text)?;
        Ok(())
    }
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn parse_pair(line: &str) -> Result<[usize; 2]> {
    let mut it = line
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| CrwError::Parse(format!("{t:?}: {e}"))));
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok([a?, b?]),
        _ => Err(CrwError::Parse(format!("expected two integers, got {line:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{contract, gen_torus, VertexSet};

    #[test]
    fn edge_list_round_trip() {
        let g = gen_torus(3, 2).unwrap();
        let back = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(back.adjacency(), g.adjacency());
    }

    #[test]
    fn json_round_trip_keeps_lattice() {
        let g = gen_torus(3, 2).unwrap();
        let back = Graph::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = gen_torus(3, 2).unwrap();
        for name in ["g.json", "g.txt"] {
            let p = dir.path().join(name);
            g.save(&p).unwrap();
            assert_eq!(Graph::load(&p).unwrap().adjacency(), g.adjacency());
        }
    }

    #[test]
    fn multigraph_json_round_trip() {
        let g = gen_torus(3, 2).unwrap();
        let c = contract(&g, &VertexSet::new(9, [0, 1, 4]).unwrap()).unwrap();
        let file = GraphFile::from_multigraph(&c.graph);
        let text = serde_json::to_string(&file).unwrap();
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_multigraph().unwrap(), c.graph);
        assert!(back.to_graph().is_err());
    }

    #[test]
    fn malformed_edge_lists() {
        assert!(Graph::from_edge_list("").is_err());
        assert!(Graph::from_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::from_edge_list("3 1\n0 x\n").is_err());
        assert!(Graph::from_edge_list("3 1\n0 1 2\n").is_err());
    }
}
