//! Network graphs and the adaptation/combination weight matrices.
//!
//! A [`NetworkGraph`] stores undirected adjacency without self entries; every
//! node's neighborhood implicitly contains the node itself. A
//! [`CombinationMatrix`] stores weights by `(l, k)`: the weight node `k` puts
//! on information received from `l`. Columns therefore sum to one.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// Resampling budget for [`generate_random_graph`].
pub const GRAPH_RETRY_BUDGET: usize = 1000;

const STOCHASTIC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkGraph {
    neighbors: Vec<Vec<usize>>,
}

impl NetworkGraph {
    /// Builds a graph from an undirected edge list. Duplicate edges are merged.
    pub fn from_edges(n_nodes: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::invalid("graph must have at least one node"));
        }
        let mut neighbors = vec![Vec::new(); n_nodes];
        for &(u, v) in edges {
            if u >= n_nodes || v >= n_nodes {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for {n_nodes} nodes"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        let graph = NetworkGraph { neighbors };
        if !graph.is_connected() {
            return Err(Error::invalid("graph is not connected"));
        }
        Ok(graph)
    }

    /// Path graph `0 - 1 - ... - (n-1)`.
    pub fn path(n_nodes: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n_nodes).map(|k| (k - 1, k)).collect();
        Self::from_edges(n_nodes, &edges)
    }

    /// Star graph centered on node 0.
    pub fn star(n_nodes: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n_nodes).map(|k| (0, k)).collect();
        Self::from_edges(n_nodes, &edges)
    }

    pub fn n_nodes(&self) -> usize {
        self.neighbors.len()
    }

    /// Neighbors of `k`, excluding `k` itself, in increasing order.
    pub fn neighbors(&self, k: usize) -> &[usize] {
        &self.neighbors[k]
    }

    /// The neighborhood `N_k`: neighbors plus `k`, in increasing order.
    pub fn neighborhood(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.neighbors[k].len() + 1);
        let pos = self.neighbors[k].partition_point(|&l| l < k);
        out.extend_from_slice(&self.neighbors[k][..pos]);
        out.push(k);
        out.extend_from_slice(&self.neighbors[k][pos..]);
        out
    }

    pub fn degree(&self, k: usize) -> usize {
        self.neighbors[k].len()
    }

    pub fn mean_degree(&self) -> f64 {
        let total: usize = self.neighbors.iter().map(Vec::len).sum();
        total as f64 / self.n_nodes() as f64
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    pub fn in_neighborhood(&self, l: usize, k: usize) -> bool {
        l == k || self.contains_edge(l, k)
    }

    /// Undirected edges with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.neighbors.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_nodes();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Serializes to the edge-list text format: `N <n>` then one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("N {}\n", self.n_nodes());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "empty edge list".into(),
        })?;
        let mut head = header.split_whitespace();
        let n_nodes = match (head.next(), head.next(), head.next()) {
            (Some("N"), Some(n), None) => n.parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                column: 3,
                message: format!("bad node count: {e}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: "expected header `N <n_nodes>`".into(),
                })
            }
        };
        let mut edges = Vec::new();
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: "expected `<u> <v>`".into(),
                });
            }
            let parse = |s: &str, column: usize| {
                s.parse::<usize>().map_err(|e| Error::Parse {
                    line: line_no,
                    column,
                    message: format!("bad node index `{s}`: {e}"),
                })
            };
            let col_v = line.find(fields[1]).unwrap_or(0) + 1;
            edges.push((parse(fields[0], 1)?, parse(fields[1], col_v)?));
        }
        Self::from_edges(n_nodes, &edges)
    }

    pub fn read_edge_list(path: &Path) -> Result<Self> {
        Self::from_edge_list(&std::fs::read_to_string(path)?)
    }
}

/// Samples an Erdős–Rényi graph with edge probability `avg_degree / (n - 1)`,
/// resampling until the result is connected.
pub fn generate_random_graph(n_nodes: usize, avg_degree: f64, seed: u64) -> Result<NetworkGraph> {
    if n_nodes < 2 {
        return Err(Error::invalid("random graph needs at least 2 nodes"));
    }
    if !(avg_degree > 0.0 && avg_degree <= (n_nodes - 1) as f64) {
        return Err(Error::invalid(format!(
            "average degree {avg_degree} outside (0, {}]",
            n_nodes - 1
        )));
    }
    let p = avg_degree / (n_nodes - 1) as f64;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    for _ in 0..GRAPH_RETRY_BUDGET {
        let mut edges = Vec::new();
        for u in 0..n_nodes {
            for v in u + 1..n_nodes {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        if let Ok(graph) = NetworkGraph::from_edges(n_nodes, &edges) {
            return Ok(graph);
        }
    }
    Err(Error::GenerationFailure {
        attempts: GRAPH_RETRY_BUDGET,
    })
}

/// Which step of the diffusion update a matrix weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRole {
    Adaptation,
    Combination,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinationMatrix {
    entries: DMatrix<f64>,
    role: MatrixRole,
}

impl CombinationMatrix {
    pub fn new(entries: DMatrix<f64>, role: MatrixRole) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::invalid("combination matrix must be square"));
        }
        Ok(CombinationMatrix { entries, role })
    }

    /// The identity, i.e. no sharing for this step.
    pub fn identity(n_nodes: usize, role: MatrixRole) -> Self {
        CombinationMatrix {
            entries: DMatrix::identity(n_nodes, n_nodes),
            role,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.entries.nrows()
    }

    pub fn role(&self) -> MatrixRole {
        self.role
    }

    pub fn with_role(mut self, role: MatrixRole) -> Self {
        self.role = role;
        self
    }

    /// Weight node `k` assigns to node `l`.
    pub fn entry(&self, l: usize, k: usize) -> f64 {
        self.entries[(l, k)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Weights node `k` assigns across its neighborhood, in neighborhood order.
    pub fn column_weights(&self, graph: &NetworkGraph, k: usize) -> Vec<f64> {
        graph
            .neighborhood(k)
            .into_iter()
            .map(|l| self.entry(l, k))
            .collect()
    }

    /// Checks sparsity, range and per-node convex-combination constraints.
    pub fn validate(&self, graph: &NetworkGraph) -> Result<()> {
        let n = graph.n_nodes();
        if self.n_nodes() != n {
            return Err(Error::invalid(format!(
                "matrix is {0}x{0} but graph has {n} nodes",
                self.n_nodes()
            )));
        }
        for k in 0..n {
            for l in 0..n {
                let value = self.entry(l, k);
                if !graph.in_neighborhood(l, k) && value != 0.0 {
                    return Err(Error::Combination(Violation::Sparsity { l, k, value }));
                }
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::Combination(Violation::Range { l, k, value }));
                }
            }
            let sum: f64 = self.entries.column(k).sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Combination(Violation::WeightSum { k, sum }));
            }
        }
        Ok(())
    }
}

/// First constraint a [`CombinationMatrix`] breaks.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Sparsity { l: usize, k: usize, value: f64 },
    Range { l: usize, k: usize, value: f64 },
    WeightSum { k: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Sparsity { l, k, value } => {
                write!(f, "sparsity: entry ({l}, {k}) = {value} but {l} is not a neighbor of {k}")
            }
            Violation::Range { l, k, value } => {
                write!(f, "range: entry ({l}, {k}) = {value} outside [0, 1]")
            }
            Violation::WeightSum { k, sum } => {
                write!(f, "weight sum: weights received by node {k} sum to {sum}")
            }
        }
    }
}

/// Metropolis weights: `1 / max(deg_l, deg_k)` on edges, remainder on the diagonal.
pub fn metropolis_weights(graph: &NetworkGraph) -> CombinationMatrix {
    let n = graph.n_nodes();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut off = 0.0;
        for &l in graph.neighbors(k) {
            let w = 1.0 / graph.degree(l).max(graph.degree(k)) as f64;
            m[(l, k)] = w;
            off += w;
        }
        // rounding can leave -1e-16 when the neighbors take everything
        m[(k, k)] = (1.0 - off).max(0.0);
    }
    CombinationMatrix {
        entries: m,
        role: MatrixRole::Combination,
    }
}
