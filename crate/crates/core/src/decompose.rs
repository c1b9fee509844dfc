//! The core-set decomposition of a tree over its smaller partite set:
//! the chain `J ⊆ J₁ ⊆ J₂ ⊆ J′ ⊆ A`, the distance-2 classes `A_i`
//! partitioning `A ∖ J′`, and induced forests `T^I` with rooted subtrees.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::tree::{LabeledTree, TreeProfile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("forest is not connected")]
    NotConnected,
    #[error("vertex {0} absent from forest")]
    VertexAbsent(usize),
}

/// Exact minimization is abandoned for a greedy rule above this many
/// free vertices; the result is flagged.
const EXACT_LIMIT: usize = 24;

/// An induced subforest of a tree: a vertex subset together with the edges
/// the tree induces on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedForest {
    verts: Vec<usize>,
    adj: BTreeMap<usize, Vec<usize>>,
}

impl InducedForest {
    fn from_vertex_set(t: &LabeledTree, set: &BTreeSet<usize>) -> Self {
        let verts: Vec<usize> = set.iter().copied().collect();
        let mut adj: BTreeMap<usize, Vec<usize>> = verts.iter().map(|&v| (v, Vec::new())).collect();
        for &v in &verts {
            for &w in t.neighbors(v) {
                if set.contains(&w) {
                    adj.get_mut(&v).unwrap().push(w);
                }
            }
        }
        InducedForest { verts, adj }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn contains(&self, v: usize) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.get(&v).map_or(0, |a| a.len())
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.adj.get(&v).map_or(&[], |a| a.as_slice())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn component_count(&self) -> usize {
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut count = 0;
        for &s in &self.verts {
            if seen.contains(&s) {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_tree(&self) -> bool {
        !self.verts.is_empty()
            && self.component_count() == 1
            && self.edge_count() == self.verts.len() - 1
    }

    /// Vertices of degree exactly 1.
    pub fn leaves(&self) -> Vec<usize> {
        self.verts.iter().copied().filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn distances_from(&self, r: usize) -> BTreeMap<usize, usize> {
        let mut dist = BTreeMap::new();
        dist.insert(r, 0);
        let mut queue = std::collections::VecDeque::from([r]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for &w in self.neighbors(u) {
                if let Entry::Vacant(slot) = dist.entry(w) {
                    slot.insert(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// `T^I`: the subgraph induced on `I` plus every middle vertex of a
/// length-2 path between two members of `I`.
pub fn induced_forest(
    t: &LabeledTree,
    p: &TreeProfile,
    i_set: &BTreeSet<usize>,
) -> Result<InducedForest, DecomposeError> {
    if let Some(&v) = i_set.iter().find(|&&v| !p.in_a(v)) {
        return Err(DecomposeError::InvalidSubset(format!(
            "vertex {} is not in the smaller partite set",
            v
        )));
    }
    let mut set: BTreeSet<usize> = i_set.clone();
    for &x in &p.b {
        let hits = t.neighbors(x).iter().filter(|w| i_set.contains(w)).count();
        if hits >= 2 {
            set.insert(x);
        }
    }
    Ok(InducedForest::from_vertex_set(t, &set))
}

/// `T^I_v`: the subtree of a rooted tree `F` containing `v` and every
/// vertex whose path to the root `r` passes through `v`.
pub fn rooted_subtree(
    f: &InducedForest,
    r: usize,
    v: usize,
) -> Result<InducedForest, DecomposeError> {
    if !f.contains(r) {
        return Err(DecomposeError::VertexAbsent(r));
    }
    if !f.contains(v) {
        return Err(DecomposeError::VertexAbsent(v));
    }
    if !f.is_tree() {
        return Err(DecomposeError::NotConnected);
    }
    // Walk down from v away from r.
    let dist = f.distances_from(r);
    let mut keep: BTreeSet<usize> = BTreeSet::new();
    let mut stack = vec![v];
    keep.insert(v);
    while let Some(u) = stack.pop() {
        for &w in f.neighbors(u) {
            if dist[&w] == dist[&u] + 1 && keep.insert(w) {
                stack.push(w);
            }
        }
    }
    let verts: Vec<usize> = keep.iter().copied().collect();
    let adj: BTreeMap<usize, Vec<usize>> = verts
        .iter()
        .map(|&u| {
            let nbrs: Vec<usize> =
                f.neighbors(u).iter().copied().filter(|w| keep.contains(w)).collect();
            (u, nbrs)
        })
        .collect();
    Ok(InducedForest { verts, adj })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub j: BTreeSet<usize>,
    pub j1: BTreeSet<usize>,
    pub j2: BTreeSet<usize>,
    pub jprime: BTreeSet<usize>,
    /// `v -> A_v`: vertices of `A ∖ J′` at distance 2 from `v ∈ J′`.
    pub ai: BTreeMap<usize, BTreeSet<usize>>,
    /// `T^{J′}`.
    pub t_jprime: InducedForest,
    pub greedy_fallback: bool,
}

impl Decomposition {
    pub fn a_count(&self, v: usize) -> usize {
        self.ai.get(&v).map_or(0, |s| s.len())
    }

    pub fn report(&self) -> DecompositionReport {
        DecompositionReport {
            j: self.j.iter().copied().collect(),
            j1: self.j1.iter().copied().collect(),
            j2: self.j2.iter().copied().collect(),
            jprime: self.jprime.iter().copied().collect(),
            ai: self
                .ai
                .iter()
                .map(|(v, s)| (v.to_string(), s.iter().copied().collect()))
                .collect(),
            greedy_fallback: self.greedy_fallback,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    #[serde(rename = "J1")]
    pub j1: Vec<usize>,
    #[serde(rename = "J2")]
    pub j2: Vec<usize>,
    #[serde(rename = "Jprime")]
    pub jprime: Vec<usize>,
    #[serde(rename = "Ai")]
    pub ai: BTreeMap<String, Vec<usize>>,
    pub greedy_fallback: bool,
}

fn common_neighbor(t: &LabeledTree, u: usize, v: usize) -> Option<usize> {
    // Trees have at most one common neighbor for any pair.
    t.neighbors(u).iter().copied().find(|&x| t.graph().has_edge(x, v))
}

/// No vertex of `A ∖ cand` may share a common neighbor with two or more
/// members of `cand`.
fn jprime_valid(t: &LabeledTree, a: &[usize], cand: &BTreeSet<usize>) -> bool {
    for &w in a {
        if cand.contains(&w) {
            continue;
        }
        let mut hits = 0;
        for &v in cand {
            if common_neighbor(t, w, v).is_some() {
                hits += 1;
                if hits >= 2 {
                    return false;
                }
            }
        }
    }
    true
}

/// Computes the full chain `J ⊆ J₁ ⊆ J₂ ⊆ J′` and the `A_i` classes.
pub fn decompose(t: &LabeledTree, p: &TreeProfile) -> Decomposition {
    let a = &p.a;

    // J: positive excess degree.
    let j: BTreeSet<usize> = a.iter().copied().filter(|&v| p.excess_of(v) > 0).collect();

    // J1: add interior vertices of A-to-A paths of length more than 2.
    // Equivalently, v has two distinct neighbors each adjacent to some
    // other vertex of A (bipartite parity makes such a path length >= 4).
    let mut j1 = j.clone();
    for &v in a {
        if j1.contains(&v) {
            continue;
        }
        let branches = t
            .neighbors(v)
            .iter()
            .filter(|&&x| {
                t.neighbors(x).iter().any(|&w| w != v && p.in_a(w))
            })
            .count();
        if branches >= 2 {
            j1.insert(v);
        }
    }

    // J2: kill every pair of A \ J2 vertices with a common neighbor.
    // Conflicts among A \ J1 group into vertex-disjoint cliques, one per
    // shared neighbor (a vertex mediating two different cliques would
    // already be in J1). From each clique keep the highest label.
    let mut j2 = j1.clone();
    for &x in &p.b {
        let clique: Vec<usize> = t
            .neighbors(x)
            .iter()
            .copied()
            .filter(|v| p.in_a(*v) && !j1.contains(v))
            .collect();
        if clique.len() >= 2 {
            for &v in &clique[..clique.len() - 1] {
                j2.insert(v);
            }
        }
    }
    debug_assert!(jprime_pairs_clear(t, a, &j2));

    // J': smallest superset of J2 such that no outside vertex has common
    // neighbors with two or more members. Exact search by subset size with
    // lexicographic tie-break; greedy fallback beyond the size cap.
    let free: Vec<usize> = a.iter().copied().filter(|v| !j2.contains(v)).collect();
    let mut greedy_fallback = false;
    let jprime: BTreeSet<usize> = if jprime_valid(t, a, &j2) {
        j2.clone()
    } else if free.len() <= EXACT_LIMIT {
        let mut found = None;
        'sizes: for k in 1..=free.len() {
            let mut combo = Combinations::new(free.len(), k);
            while let Some(idx) = combo.next() {
                let mut cand = j2.clone();
                cand.extend(idx.iter().map(|&i| free[i]));
                if jprime_valid(t, a, &cand) {
                    found = Some(cand);
                    break 'sizes;
                }
            }
        }
        found.expect("all of A is always a valid J'")
    } else {
        greedy_fallback = true;
        let mut cand = j2.clone();
        loop {
            let violator = a.iter().copied().find(|&w| {
                !cand.contains(&w)
                    && cand.iter().filter(|&&v| common_neighbor(t, w, v).is_some()).count() >= 2
            });
            match violator {
                Some(w) => {
                    cand.insert(w);
                }
                None => break cand,
            }
        }
    };

    // A_i classes: distance-2 members of A \ J' per J' vertex.
    let mut ai: BTreeMap<usize, BTreeSet<usize>> =
        jprime.iter().map(|&v| (v, BTreeSet::new())).collect();
    for &w in a {
        if jprime.contains(&w) {
            continue;
        }
        let owners: Vec<usize> = jprime
            .iter()
            .copied()
            .filter(|&v| common_neighbor(t, w, v).is_some())
            .collect();
        debug_assert!(owners.len() <= 1, "J' property violated");
        if let Some(&owner) = owners.first() {
            ai.get_mut(&owner).unwrap().insert(w);
        }
    }

    let t_jprime = induced_forest(t, p, &jprime).expect("J' is a subset of A");

    Decomposition { j, j1, j2, jprime, ai, t_jprime, greedy_fallback }
}

fn jprime_pairs_clear(t: &LabeledTree, a: &[usize], j2: &BTreeSet<usize>) -> bool {
    let outside: Vec<usize> = a.iter().copied().filter(|v| !j2.contains(v)).collect();
    for (i, &u) in outside.iter().enumerate() {
        for &v in &outside[i + 1..] {
            if common_neighbor(t, u, v).is_some() {
                return false;
            }
        }
    }
    true
}

/// Lexicographic k-combinations of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), started: false, done: k > n }
    }

    fn next(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.idx[i] != i + self.n - k {
                break;
            }
        }
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(&self.idx)
    }
}
