//! Labeled trees, their unique bipartition, and the `(m, l, delta, t)`
//! parametrization read off the smaller partite set.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad label: {0}")]
    BadLabel(String),
    #[error("not a tree: {0}")]
    NotATree(String),
}

/// Immutable tree on dense integer labels `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    g: Graph,
}

impl LabeledTree {
    /// Validates the tree property: connected with exactly `m - 1` edges.
    pub fn from_graph(g: Graph) -> Result<Self, TreeError> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(TreeError::NotATree("empty vertex set".into()));
        }
        if g.edge_count() != n - 1 {
            return Err(TreeError::NotATree(format!(
                "{} edges on {} vertices",
                g.edge_count(),
                n
            )));
        }
        if !g.is_connected() {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        Ok(LabeledTree { g })
    }

    pub fn single_vertex() -> Self {
        LabeledTree { g: Graph::empty(1) }
    }

    /// Parses the shared edge-list format. Labels must be exactly `0..m`;
    /// sparse label sets are rejected rather than compacted.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let g = Graph::parse_edge_list(text).map_err(|e| match e {
            GraphError::Parse(msg) => TreeError::Parse(msg),
            GraphError::BadLabel(msg) => TreeError::BadLabel(msg),
            GraphError::SelfLoop(v) => TreeError::NotATree(format!("self-loop at {}", v)),
            GraphError::DuplicateEdge(u, v) => {
                TreeError::NotATree(format!("duplicate edge {} {}", u, v))
            }
            GraphError::OutOfRange(v, n) => {
                TreeError::BadLabel(format!("label {} with declared n={}", v, n))
            }
        })?;
        // Every label below the maximum must occur in some edge.
        if let Some(gap) = (0..g.vertex_count()).find(|&v| g.degree(v) == 0) {
            if g.vertex_count() > 1 {
                return Err(TreeError::BadLabel(format!("label {} never used", gap)));
            }
        }
        LabeledTree::from_graph(g)
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn vertex_count(&self) -> usize {
        self.g.vertex_count()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.g.degree(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.g.neighbors(v)
    }

    pub fn to_edge_list(&self) -> String {
        self.g.to_edge_list()
    }

    /// Applies a relabeling permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> LabeledTree {
        let edges: Vec<(usize, usize)> = self
            .g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        LabeledTree {
            g: Graph::from_edges(self.vertex_count(), &edges).unwrap(),
        }
    }
}

/// The `(m, l, delta, t)` parametrization of a tree, together with its
/// bipartition and per-vertex excess degrees over the smaller partite set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeProfile {
    pub m: usize,
    /// Smaller partite set, sorted. `|a| = l + 1`.
    pub a: Vec<usize>,
    /// Larger partite set, sorted.
    pub b: Vec<usize>,
    pub l: usize,
    pub delta: usize,
    /// `t = m - 1 - (l + 1) * delta`, the total excess degree over `a`.
    pub t: usize,
    /// `v -> t_v = deg(v) - delta` for `v` in the smaller partite set.
    pub excess: BTreeMap<usize, usize>,
}

impl TreeProfile {
    pub fn excess_of(&self, v: usize) -> usize {
        self.excess[&v]
    }

    pub fn in_a(&self, v: usize) -> bool {
        self.a.binary_search(&v).is_ok()
    }
}

/// Computes the unique profile of a tree. When the partite sets have equal
/// size, the class containing vertex 0 is taken as the smaller set; the
/// minimum degree over it is 1 in that case either way.
pub fn profile(t: &LabeledTree) -> TreeProfile {
    let m = t.vertex_count();
    if m == 1 {
        let mut excess = BTreeMap::new();
        excess.insert(0, 0);
        return TreeProfile { m, a: vec![0], b: vec![], l: 0, delta: 0, t: 0, excess };
    }
    let (class0, class1) = t.graph().bipartition().expect("trees are bipartite");
    // class0 contains vertex 0, so the tie-break lands there automatically.
    let (a, b) = if class0.len() <= class1.len() {
        (class0, class1)
    } else {
        (class1, class0)
    };
    let l = a.len() - 1;
    let delta = a.iter().map(|&v| t.degree(v)).min().unwrap();
    let excess: BTreeMap<usize, usize> = a.iter().map(|&v| (v, t.degree(v) - delta)).collect();
    let total: usize = excess.values().sum();
    debug_assert_eq!(total, m - 1 - (l + 1) * delta);
    TreeProfile { m, a, b, l, delta, t: total, excess }
}

/// Nonemptiness of the family with parameters `(m, l, delta)`:
/// for `l > 0` it requires `m >= max(2l + 2, (l + 1) * delta + 1)`,
/// and for `l = 0` exactly the star, `m = delta + 1`.
pub fn family_feasible(m: usize, l: usize, delta: usize) -> bool {
    if delta == 0 {
        return false;
    }
    if l == 0 {
        m == delta + 1
    } else {
        m >= (2 * l + 2).max((l + 1) * delta + 1)
    }
}
