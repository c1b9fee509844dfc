//! Simple undirected graphs on dense labels `0..n`, with the shared
//! edge-list text format used by every tool in this workspace.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad label: {0}")]
    BadLabel(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} out of range (n = {1})")]
    OutOfRange(usize, usize),
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.vertex_count();
        if u >= n {
            return Err(GraphError::OutOfRange(u, n));
        }
        if v >= n {
            return Err(GraphError::OutOfRange(v, n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if let Ok(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(pos);
            let pos = self.adj[v].binary_search(&u).unwrap();
            self.adj[v].remove(pos);
            true
        } else {
            false
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
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

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        n == 0 || self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Two-coloring if the graph is bipartite. Each component is colored
    /// starting from its smallest vertex, which goes to class 0.
    pub fn bipartition(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = self.vertex_count();
        let mut color: Vec<Option<u8>> = vec![None; n];
        for s in 0..n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(1 - cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let class0 = (0..n).filter(|&v| color[v] == Some(0)).collect();
        let class1 = (0..n).filter(|&v| color[v] == Some(1)).collect();
        Some((class0, class1))
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0).unwrap();
        g
    }

    /// Star with center 0 and `leaves` pendant vertices.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1);
        for v in 1..=leaves {
            g.add_edge(0, v).unwrap();
        }
        g
    }

    /// Disjoint union; part `i` is shifted by the total size of parts before it.
    pub fn disjoint_union(parts: &[&Graph]) -> Self {
        let n = parts.iter().map(|g| g.vertex_count()).sum();
        let mut g = Graph::empty(n);
        let mut off = 0;
        for part in parts {
            for (u, v) in part.edges() {
                g.add_edge(u + off, v + off).unwrap();
            }
            off += part.vertex_count();
        }
        g
    }

    /// Join: disjoint union plus all edges between the two vertex sets.
    /// Vertices of `g1` keep their labels; `g2` is shifted by `g1.vertex_count()`.
    pub fn join(g1: &Graph, g2: &Graph) -> Self {
        let n1 = g1.vertex_count();
        let mut g = Graph::disjoint_union(&[g1, g2]);
        for u in 0..n1 {
            for v in n1..n1 + g2.vertex_count() {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    /// Parses the shared edge-list format: one `u v` pair per line,
    /// whitespace-separated decimal labels, `#` lines ignored. A comment of
    /// the form `# graph n=K` pins the vertex count (needed for graphs with
    /// isolated vertices); otherwise `n` is one past the largest label.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut declared_n: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut max_label: Option<usize> = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for token in rest.split_whitespace() {
                    if let Some(val) = token.strip_prefix("n=") {
                        declared_n = Some(val.parse().map_err(|_| {
                            GraphError::Parse(format!("line {}: bad n= directive", lineno + 1))
                        })?);
                    }
                }
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(GraphError::Parse(format!(
                    "line {}: expected two labels, got {:?}",
                    lineno + 1,
                    line
                )));
            }
            let mut pair = [0usize; 2];
            for (slot, tok) in pair.iter_mut().zip(&tokens) {
                let value: i64 = tok
                    .parse()
                    .map_err(|_| GraphError::Parse(format!("line {}: {:?} is not an integer", lineno + 1, tok)))?;
                if value < 0 {
                    return Err(GraphError::BadLabel(format!("negative label {}", value)));
                }
                *slot = value as usize;
            }
            max_label = Some(max_label.unwrap_or(0).max(pair[0]).max(pair[1]));
            edges.push((pair[0], pair[1]));
        }
        let n = match (declared_n, max_label) {
            (Some(n), Some(max)) if max >= n => {
                return Err(GraphError::BadLabel(format!("label {} exceeds declared n={}", max, n)))
            }
            (Some(n), _) => n,
            (None, Some(max)) => max + 1,
            (None, None) => return Err(GraphError::Parse("no edges and no n= directive".into())),
        };
        Graph::from_edges(n, &edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# graph n={}\n", self.vertex_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u, v));
        }
        out
    }
}
