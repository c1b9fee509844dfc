//! Exhaustive oracles at desk scale: free-tree enumeration, small-graph
//! enumeration up to isomorphism, forbidden-tree certification by complete
//! search, brute-force extremal spectral radius for tiny orders, and the
//! candidate host constructions the bounds are measured against.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::embed::{find_embedding_exact, EmbeddingMap, JoinHost, NonembeddabilityCert, SearchOutcome};
use crate::graph::Graph;
use crate::spectral::{regular_or_almost, spectral_radius, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};
use crate::tree::{profile, LabeledTree, TreeProfile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabError {
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("unsupported delta: {0}")]
    UnsupportedDelta(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub const TREE_ENUM_MAX: usize = 12;
pub const GRAPH_ENUM_MAX: usize = 8;
/// Bounded-degree enumeration stays tiny well past the general cap.
pub const BOUNDED_ENUM_MAX: usize = 12;

/// Free-tree counts per order, used to validate the enumerator.
pub const FREE_TREE_COUNTS: [usize; 12] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551];

/// Simple graph on at most 16 vertices with bit-packed adjacency rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: usize,
    rows: Vec<u16>,
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= 16);
        SmallGraph { n, rows: vec![0; n] }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 16, "bit-packed graphs hold at most 16 vertices");
        let mut rows = vec![0u16; n];
        for (u, v) in g.edges() {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        SmallGraph { n, rows }
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Appends vertex `n` adjacent to the set encoded by `bits`.
    fn extend_with(&self, bits: u16) -> SmallGraph {
        let mut rows = self.rows.clone();
        for (u, row) in rows.iter_mut().enumerate() {
            if bits >> u & 1 == 1 {
                *row |= 1 << self.n;
            }
        }
        rows.push(bits);
        SmallGraph { n: self.n + 1, rows }
    }

    /// Upper-triangle edge bits under the identity labeling.
    fn code_with(&self, inv: &[usize]) -> u128 {
        let mut code = 0u128;
        let mut bit = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(inv[i], inv[j]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        code
    }

    /// Canonical code: the minimum edge-bit code over all labelings
    /// compatible with iterated degree refinement, found by
    /// individualization and backtracking.
    pub fn canonical_code(&self) -> u128 {
        self.canonicalize().0
    }

    /// Canonically relabeled copy.
    pub fn canonical_form(&self) -> SmallGraph {
        let (_, inv) = self.canonicalize();
        let mut rows = vec![0u16; self.n];
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(inv[i], inv[j]) {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
            }
        }
        SmallGraph { n: self.n, rows }
    }

    fn canonicalize(&self) -> (u128, Vec<usize>) {
        if self.n == 0 {
            return (0, vec![]);
        }
        // initial partition by degree
        let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.n {
            by_degree.entry(self.degree(v)).or_default().push(v);
        }
        let cells: Vec<Vec<usize>> = by_degree.into_values().collect();
        let cells = self.refine(cells);
        let mut best: Option<(u128, Vec<usize>)> = None;
        self.search(cells, &mut best);
        best.expect("search visits at least one leaf")
    }

    /// Equitable refinement: split cells by neighbor counts into every cell
    /// until stable. Subcell order follows the count signature, so the
    /// result is independent of vertex labels.
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        loop {
            let masks: Vec<u16> = cells
                .iter()
                .map(|c| c.iter().fold(0u16, |m, &v| m | 1 << v))
                .collect();
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
            let mut changed = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
                for &v in cell {
                    let sig: Vec<u32> =
                        masks.iter().map(|&m| (self.rows[v] & m).count_ones()).collect();
                    groups.entry(sig).or_default().push(v);
                }
                if groups.len() > 1 {
                    changed = true;
                }
                next.extend(groups.into_values());
            }
            cells = next;
            if !changed {
                return cells;
            }
        }
    }

    fn search(&self, cells: Vec<Vec<usize>>, best: &mut Option<(u128, Vec<usize>)>) {
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let inv: Vec<usize> = cells.iter().map(|c| c[0]).collect();
                let code = self.code_with(&inv);
                if best.as_ref().is_none_or(|(b, _)| code < *b) {
                    *best = Some((code, inv));
                }
            }
            Some(i) => {
                for k in 0..cells[i].len() {
                    let v = cells[i][k];
                    let mut split: Vec<Vec<usize>> = Vec::with_capacity(cells.len() + 1);
                    split.extend_from_slice(&cells[..i]);
                    split.push(vec![v]);
                    let rest: Vec<usize> =
                        cells[i].iter().copied().filter(|&w| w != v).collect();
                    split.push(rest);
                    split.extend_from_slice(&cells[i + 1..]);
                    self.search(self.refine(split), best);
                }
            }
        }
    }
}

/// Rooted canonical code with sorted child codes; free-tree code via the
/// centroid (or the centroid pair, wrapped distinctly).
fn tree_code(t: &Graph) -> String {
    fn rooted(t: &Graph, v: usize, parent: Option<usize>) -> String {
        let mut kids: Vec<String> = t
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| Some(w) != parent)
            .map(|w| rooted(t, w, Some(v)))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    let n = t.vertex_count();
    if n == 1 {
        return "()".into();
    }
    // centroid(s): minimize the largest component after removal
    let mut size = vec![1usize; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in t.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }
    let weight = |v: usize| -> usize {
        let mut w = n - size[v];
        for &u in t.neighbors(v) {
            if parent[u] == v {
                w = w.max(size[u]);
            }
        }
        w
    };
    let min_weight = (0..n).map(weight).min().unwrap();
    let centroids: Vec<usize> = (0..n).filter(|&v| weight(v) == min_weight).collect();
    match centroids[..] {
        [c] => rooted(t, c, None),
        [c1, c2] => {
            let a = rooted(t, c1, Some(c2));
            let b = rooted(t, c2, Some(c1));
            if a <= b {
                format!("[{}{}]", a, b)
            } else {
                format!("[{}{}]", b, a)
            }
        }
        _ => unreachable!("trees have one or two centroids"),
    }
}

/// All free trees on `m` vertices, one representative per isomorphism
/// class, in canonical-code order. Built by leaf augmentation with
/// canonical-code rejection.
pub fn enumerate_trees(m: usize) -> Result<Vec<LabeledTree>, LabError> {
    if m == 0 || m > TREE_ENUM_MAX {
        return Err(LabError::OutOfRange(format!("tree order {} not in 1..={}", m, TREE_ENUM_MAX)));
    }
    let mut level: Vec<(String, Graph)> = vec![("()".into(), Graph::empty(1))];
    for k in 1..m {
        let mut seen: HashMap<String, Graph> = HashMap::new();
        for (_, g) in &level {
            for v in 0..k {
                let mut bigger = Graph::empty(k + 1);
                for (a, b) in g.edges() {
                    bigger.add_edge(a, b).unwrap();
                }
                bigger.add_edge(v, k).unwrap();
                let code = tree_code(&bigger);
                seen.entry(code).or_insert(bigger);
            }
        }
        let mut next: Vec<(String, Graph)> = seen.into_iter().collect();
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next;
    }
    Ok(level
        .into_iter()
        .map(|(_, g)| LabeledTree::from_graph(g).expect("augmentation preserves the tree property"))
        .collect())
}

/// All graphs on `n` vertices up to isomorphism, by vertex augmentation
/// with canonical rejection, in canonical-code order. `max_degree` caps
/// the enumeration (and raises the feasible `n`).
pub fn enumerate_graphs(n: usize, max_degree: Option<usize>) -> Result<Vec<SmallGraph>, LabError> {
    let cap = match max_degree {
        Some(d) if d <= 2 => BOUNDED_ENUM_MAX,
        _ => GRAPH_ENUM_MAX,
    };
    if n == 0 || n > cap {
        return Err(LabError::TooLarge(format!("graph order {} not in 1..={}", n, cap)));
    }
    let degree_ok = |g: &SmallGraph, bits: u16| -> bool {
        match max_degree {
            None => true,
            Some(d) => {
                if (bits.count_ones() as usize) > d {
                    return false;
                }
                (0..g.vertex_count()).all(|u| bits >> u & 1 == 0 || g.degree(u) < d)
            }
        }
    };
    let mut level: Vec<SmallGraph> = vec![SmallGraph::empty(1)];
    for k in 1..n {
        let mut seen: HashSet<u128> = HashSet::new();
        let mut next: Vec<(u128, SmallGraph)> = Vec::new();
        for g in &level {
            for bits in 0..(1u32 << k) {
                let bits = bits as u16;
                if !degree_ok(g, bits) {
                    continue;
                }
                let child = g.extend_with(bits);
                let canon = child.canonical_form();
                let code = canon.canonical_code();
                if seen.insert(code) {
                    next.push((code, canon));
                }
            }
        }
        next.sort_by_key(|(code, _)| *code);
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    Ok(level)
}

fn graph_cache(n: usize) -> Arc<Vec<SmallGraph>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<SmallGraph>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(enumerate_graphs(n, None).expect("n is pre-checked")))
        .clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TFreeOutcome {
    /// Complete search found no copy; the graph avoids the tree.
    Free,
    /// A verified copy of the tree in the graph.
    Contains(EmbeddingMap),
}

/// Wraps the exact search as a certifier. `Free` is only returned when the
/// search space was exhausted; running out of budget is an error, never a
/// verdict.
pub fn certify_t_free(g: &Graph, t: &LabeledTree, budget: u64) -> Result<TFreeOutcome, LabError> {
    match find_embedding_exact(t, g, budget) {
        Ok(SearchOutcome::Exhausted) => Ok(TFreeOutcome::Free),
        Ok(SearchOutcome::Found(map)) => {
            debug_assert!(crate::embed::verify_embedding(t, g, &map.map));
            Ok(TFreeOutcome::Contains(map))
        }
        Err(_) => Err(LabError::BudgetExceeded),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateMode {
    /// `K_l ∨ H₂'` with `H₂'` `(δ-2)`-regular or almost-regular: the
    /// certified forbidden-tree-free graph whose spectral radius witnesses
    /// the lower bound.
    Lower,
    /// `K̄_l ∨ m S_δ`, the host for embedding experiments.
    StarHost,
}

#[derive(Debug, Clone)]
pub struct CandidateBuild {
    pub host: JoinHost,
    pub graph: Graph,
    pub certificate: Option<NonembeddabilityCert>,
}

/// Builds the candidate host for the profiled tree at order `n`.
pub fn build_candidate(
    p: &TreeProfile,
    n: usize,
    mode: CandidateMode,
) -> Result<CandidateBuild, LabError> {
    match mode {
        CandidateMode::StarHost => {
            let host = JoinHost::star_pack(p.l, p.m, p.delta);
            let graph = host.to_graph();
            Ok(CandidateBuild { host, graph, certificate: None })
        }
        CandidateMode::Lower => {
            if p.delta < 2 {
                return Err(LabError::UnsupportedDelta(
                    "the lower construction needs delta >= 2".into(),
                ));
            }
            if n < p.m + p.l {
                return Err(LabError::Infeasible(format!(
                    "n = {} is below m + l = {}",
                    n,
                    p.m + p.l
                )));
            }
            let h2 = regular_or_almost(n - p.l, p.delta - 2);
            let host = JoinHost::general(Graph::complete(p.l), h2);
            let certificate = crate::embed::certify_profile_nonembeddable(p, &host)
                .expect("the construction satisfies the degree hypothesis");
            let graph = host.to_graph();
            Ok(CandidateBuild { host, graph, certificate: Some(certificate) })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpexReport {
    pub n: usize,
    pub tree_edges: Vec<(usize, usize)>,
    /// Number of isomorphism classes on `n` vertices, and how many avoid
    /// the tree.
    pub class_count: usize,
    pub free_count: usize,
    pub lambda_max: f64,
    /// Edge lists of the canonically labeled maximizers.
    pub extremal_graphs: Vec<Vec<(usize, usize)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate_lambda: Option<f64>,
    pub agrees: bool,
}

/// Exhaustive extremal spectral radius over all graphs on `n ≤ 8` vertices
/// avoiding the given tree, with the candidate construction alongside.
/// Small-order results need not match the asymptotic structure, so
/// agreement is recorded, never asserted.
pub fn brute_force_spex(n: usize, t: &LabeledTree) -> Result<SpexReport, LabError> {
    if n == 0 || n > GRAPH_ENUM_MAX {
        return Err(LabError::TooLarge(format!(
            "exhaustive extremal search handles 1..={} vertices",
            GRAPH_ENUM_MAX
        )));
    }
    let graphs = graph_cache(n);
    let p = profile(t);
    let mut lambda_max = f64::NEG_INFINITY;
    let mut extremal: Vec<(f64, SmallGraph)> = Vec::new();
    let mut free_count = 0usize;
    for g in graphs.iter() {
        let host = g.to_graph();
        match certify_t_free(&host, t, 10_000_000)? {
            TFreeOutcome::Contains(_) => continue,
            TFreeOutcome::Free => {}
        }
        free_count += 1;
        let lam = if host.edge_count() == 0 {
            0.0
        } else {
            spectral_radius(&host, DEFAULT_TOL, DEFAULT_MAX_SWEEPS).lambda
        };
        if lam > lambda_max {
            lambda_max = lam;
        }
        extremal.push((lam, g.clone()));
    }
    extremal.retain(|(lam, _)| *lam >= lambda_max - 1e-9);
    extremal.sort_by_key(|(_, g)| g.canonical_code());

    // candidate: the certified construction when delta >= 2 fits, else the
    // complete bipartite fallback that every family member overflows
    let candidate = candidate_graph(&p, n);
    let candidate_lambda = candidate.map(|g| {
        debug_assert!(matches!(
            certify_t_free(&g, t, 10_000_000),
            Ok(TFreeOutcome::Free)
        ));
        if g.edge_count() == 0 {
            0.0
        } else {
            spectral_radius(&g, DEFAULT_TOL, DEFAULT_MAX_SWEEPS).lambda
        }
    });
    let agrees = candidate_lambda.is_some_and(|c| (lambda_max - c).abs() <= 1e-9);
    Ok(SpexReport {
        n,
        tree_edges: t.graph().edges(),
        class_count: graphs.len(),
        free_count,
        lambda_max,
        extremal_graphs: extremal.into_iter().map(|(_, g)| g.edges()).collect(),
        candidate_lambda,
        agrees,
    })
}

fn candidate_graph(p: &TreeProfile, n: usize) -> Option<Graph> {
    if p.delta >= 2 {
        let p2 = n.checked_sub(p.l)?;
        if p2 > p.delta.saturating_sub(2) + 1 {
            let h2 = regular_or_almost(p2, p.delta - 2);
            return Some(Graph::join(&Graph::complete(p.l), &h2));
        }
        None
    } else {
        // delta = 1: both partite sets of the tree exceed l, so K_{l,n-l}
        // holds no copy
        if n > p.l {
            Some(Graph::complete_bipartite(p.l, n - p.l))
        } else {
            None
        }
    }
}
