//! Rooted weighted trees: the computable stand-in for tree-like geodesic
//! spaces. Provides depths, last common ancestors, and the shortest-path
//! metric on the vertex set.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

#[derive(Debug, Clone)]
pub struct RootedTree {
    labels: Vec<String>,
    parent: Vec<Option<usize>>,
    parent_edge_len: Vec<f64>,
    children: Vec<Vec<usize>>,
    depth: Vec<f64>,
    /// Euler-tour intervals for O(1) ancestor tests.
    tin: Vec<usize>,
    tout: Vec<usize>,
    root: usize,
}

impl RootedTree {
    /// Build from undirected weighted edges and a root label. The edge
    /// list must form a connected acyclic graph with positive lengths.
    pub fn from_edges(edges: &[(String, String, f64)], root: &str) -> Result<Self> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut order: Vec<&str> = vec![root];
        for (u, v, _) in edges {
            order.push(u);
            order.push(v);
        }
        for label in order {
            if !index.contains_key(label) {
                index.insert(label.to_string(), labels.len());
                labels.push(label.to_string());
            }
        }
        let n = labels.len();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (u, v, len) in edges {
            if !(len.is_finite() && *len > 0.0) {
                return Err(Error::bad_tree(format!(
                    "edge ({u},{v}) has nonpositive length {len}"
                )));
            }
            let ui = index[u.as_str()];
            let vi = index[v.as_str()];
            if ui == vi {
                return Err(Error::bad_tree(format!("self-loop at {u}")));
            }
            adj[ui].push((vi, *len));
            adj[vi].push((ui, *len));
        }
        if edges.len() + 1 != n {
            return Err(Error::bad_tree(format!(
                "{} edges on {} vertices cannot be a tree",
                edges.len(),
                n
            )));
        }
        let root_idx = 0;
        let mut parent = vec![None; n];
        let mut parent_edge_len = vec![0.0; n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut depth = vec![0.0; n];
        let mut seen = vec![false; n];
        let mut stack = vec![root_idx];
        seen[root_idx] = true;
        while let Some(u) = stack.pop() {
            for &(v, len) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    parent_edge_len[v] = len;
                    depth[v] = depth[u] + len;
                    children[u].push(v);
                    stack.push(v);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::bad_tree("graph is not connected".into()));
        }
        let mut tin = vec![0; n];
        let mut tout = vec![0; n];
        let mut clock = 0;
        // Iterative Euler tour.
        let mut walk: Vec<(usize, bool)> = vec![(root_idx, false)];
        while let Some((u, done)) = walk.pop() {
            if done {
                tout[u] = clock;
                continue;
            }
            tin[u] = clock;
            clock += 1;
            walk.push((u, true));
            for &c in children[u].iter().rev() {
                walk.push((c, false));
            }
        }
        Ok(RootedTree {
            labels,
            parent,
            parent_edge_len,
            children,
            depth,
            tin,
            tout,
            root: root_idx,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn depth(&self, v: usize) -> f64 {
        self.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parent_edge_len(&self, v: usize) -> f64 {
        self.parent_edge_len[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// True when `anc` lies on the path from the root to `v`.
    pub fn is_ancestor(&self, anc: usize, v: usize) -> bool {
        self.tin[anc] <= self.tin[v] && self.tout[v] <= self.tout[anc]
    }

    /// Last common ancestor of two vertices.
    pub fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while u != v {
            if self.depth[u] < self.depth[v] {
                std::mem::swap(&mut u, &mut v);
            }
            u = self.parent[u].expect("walked past the root");
        }
        u
    }

    /// Last common ancestor of a nonempty vertex set: the deepest vertex
    /// lying on the root path of every member.
    pub fn last_common_ancestor(&self, subset: &[usize]) -> Result<usize> {
        let mut it = subset.iter();
        let first = *it
            .next()
            .ok_or_else(|| Error::bad_params("ancestor of an empty set".into()))?;
        Ok(it.fold(first, |acc, &v| self.lca(acc, v)))
    }

    /// Shortest-path distance between two vertices.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        let l = self.lca(u, v);
        (self.depth[u] - self.depth[l]) + (self.depth[v] - self.depth[l])
    }

    /// The vertex set under the shortest-path metric.
    pub fn to_metric_space(&self) -> Result<FiniteMetricSpace> {
        let n = self.len();
        let mut matrix = vec![vec![0.0; n]; n];
        for u in 0..n {
            for v in (u + 1)..n {
                let d = self.distance(u, v);
                matrix[u][v] = d;
                matrix[v][u] = d;
            }
        }
        FiniteMetricSpace::validate(matrix)?.with_labels(self.labels.clone())
    }

    pub fn to_metric_space_arc(&self) -> Result<Arc<FiniteMetricSpace>> {
        Ok(Arc::new(self.to_metric_space()?))
    }
}
