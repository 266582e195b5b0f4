//! Undirected weighted communication graph.
//!
//! Nodes are sensors, indexed 0-based in the API. Edge lists coming from
//! configuration files use 1-based indices and are converted at the boundary.

use crate::error::{ConfigError, GraphError};
use nalgebra::DMatrix;

/// Symmetric nonnegative adjacency with zero diagonal. Immutable after
/// construction, safe to share across concurrent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGraph {
    m: usize,
    weights: Vec<f64>, // row-major m x m
}

impl NetworkGraph {
    /// Builds from a full weight matrix; checks symmetry, nonnegativity and a
    /// zero diagonal.
    pub fn from_weights(weights: Vec<Vec<f64>>) -> Result<Self, ConfigError> {
        let m = weights.len();
        if m == 0 {
            return Err(ConfigError::new("graph", "empty weight matrix"));
        }
        let mut flat = vec![0.0; m * m];
        for (i, row) in weights.iter().enumerate() {
            if row.len() != m {
                return Err(ConfigError::new(
                    "graph",
                    format!("row {i} has {} entries, expected {m}", row.len()),
                ));
            }
            for (j, &w) in row.iter().enumerate() {
                if !w.is_finite() || w < 0.0 {
                    return Err(ConfigError::new(
                        "graph",
                        format!("weight[{i}][{j}] = {w} must be finite and nonnegative"),
                    ));
                }
                if i == j && w != 0.0 {
                    return Err(ConfigError::new("graph", format!("diagonal weight[{i}][{i}] must be 0")));
                }
                if weights[j][i] != w {
                    return Err(ConfigError::new(
                        "graph",
                        format!("asymmetric weights: [{i}][{j}]={w} but [{j}][{i}]={}", weights[j][i]),
                    ));
                }
                flat[i * m + j] = w;
            }
        }
        Ok(NetworkGraph { m, weights: flat })
    }

    /// Builds from an edge list with 1-based node indices. Each `(i, j, w)`
    /// sets both directions; repeating an edge with a different weight is an
    /// error.
    pub fn from_edges(m: usize, edges: &[(usize, usize, f64)]) -> Result<Self, ConfigError> {
        if m == 0 {
            return Err(ConfigError::new("graph.m", "need at least one node"));
        }
        let mut flat = vec![0.0; m * m];
        for &(i, j, w) in edges {
            if i < 1 || i > m || j < 1 || j > m {
                return Err(ConfigError::new(
                    "graph.edges",
                    format!("edge ({i}, {j}) outside 1..={m}"),
                ));
            }
            if i == j {
                return Err(ConfigError::new("graph.edges", format!("self-loop on node {i}")));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(ConfigError::new(
                    "graph.edges",
                    format!("edge ({i}, {j}) weight {w} must be finite and positive"),
                ));
            }
            let (a, b) = (i - 1, j - 1);
            let prev = flat[a * m + b];
            if prev != 0.0 && prev != w {
                return Err(ConfigError::new(
                    "graph.edges",
                    format!("edge ({i}, {j}) given twice with weights {prev} and {w}"),
                ));
            }
            flat[a * m + b] = w;
            flat[b * m + a] = w;
        }
        Ok(NetworkGraph { m, weights: flat })
    }

    /// Cycle graph C_m with unit weights, the default experiment topology.
    pub fn cycle(m: usize) -> Self {
        assert!(m >= 3, "cycle graph needs at least 3 nodes");
        let edges: Vec<(usize, usize, f64)> =
            (1..=m).map(|i| (i, i % m + 1, 1.0)).collect();
        Self::from_edges(m, &edges).expect("cycle edges are valid")
    }

    /// Complete graph K_m with unit weights.
    pub fn complete(m: usize) -> Self {
        assert!(m >= 2, "complete graph needs at least 2 nodes");
        let mut edges = Vec::new();
        for i in 1..=m {
            for j in (i + 1)..=m {
                edges.push((i, j, 1.0));
            }
        }
        Self::from_edges(m, &edges).expect("complete edges are valid")
    }

    pub fn node_count(&self) -> usize {
        self.m
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.m && j < self.m, "node index out of range");
        self.weights[i * self.m + j]
    }

    /// Neighbors of node `i` (0-based), ascending.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        assert!(i < self.m, "node index {i} out of range for {} nodes", self.m);
        (0..self.m).filter(|&j| self.weights[i * self.m + j] > 0.0).collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    /// Sum of all node degrees, i.e. the number of directed channels.
    pub fn total_degree(&self) -> usize {
        (0..self.m).map(|i| self.degree(i)).sum()
    }

    /// All directed channels as `(sender, receiver)` pairs in a fixed order.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.total_degree());
        for i in 0..self.m {
            for j in 0..self.m {
                if self.weights[i * self.m + j] > 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Laplacian L = D - A with D the diagonal of row sums.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let m = self.m;
        let mut l = DMatrix::zeros(m, m);
        for i in 0..m {
            let mut row_sum = 0.0;
            for j in 0..m {
                let w = self.weights[i * m + j];
                row_sum += w;
                l[(i, j)] = -w;
            }
            l[(i, i)] = row_sum;
        }
        l
    }

    /// All Laplacian eigenvalues, ascending.
    pub fn laplacian_eigenvalues(&self) -> Vec<f64> {
        let eig = self.laplacian().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        vals
    }

    /// Algebraic connectivity: the second-smallest Laplacian eigenvalue.
    /// Requires a connected graph with at least two nodes.
    pub fn lambda2(&self) -> Result<f64, GraphError> {
        if self.m < 2 {
            return Err(GraphError::TooFewNodes(self.m));
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.laplacian_eigenvalues()[1])
    }

    /// Breadth-first reachability over positive-weight edges from node 0.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.m];
        let mut queue = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop() {
            for j in self.neighbors(i) {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push(j);
                }
            }
        }
        count == self.m
    }
}
