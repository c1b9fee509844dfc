//! The embedding hypothesis: witness sets `I ⊆ J′` for which `T^I` is a
//! tree and the class sizes dominate the excess degrees, plus the
//! refinement procedure that shrinks a witness until every member also
//! satisfies the per-vertex degree inequality.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::decompose::{induced_forest, Decomposition};
use crate::tree::{LabeledTree, TreeProfile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypothesisError {
    #[error("empty witness set")]
    EmptyWitness,
    #[error("vertex {0} is not in J'")]
    NotSubsetOfJprime(usize),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerVertexCheck {
    pub v: usize,
    pub a: usize,
    pub t: usize,
}

/// Evaluation of the hypothesis against one candidate witness set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCertificate {
    pub witness: Vec<usize>,
    /// `Σ a_i` over the witness.
    pub lhs: usize,
    /// `2 + Σ (t_i - 1)`; may be negative.
    pub rhs: i64,
    /// `T^I` is a tree.
    pub tree_check: bool,
    pub per_vertex: Vec<PerVertexCheck>,
    /// All `a_i <= t_i`; checked only when the witness has more than one vertex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excess_ok: Option<bool>,
    /// `N_T(T^I ∖ J′) = I`; checked only when the witness has more than one vertex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighborhood_ok: Option<bool>,
}

impl HypothesisCertificate {
    pub fn is_valid(&self) -> bool {
        self.tree_check
            && self.lhs as i64 >= self.rhs
            && self.excess_ok.unwrap_or(true)
            && self.neighborhood_ok.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(HypothesisCertificate),
    NoWitness,
    /// `J'` exceeded the exhaustive-search cap without an early hit.
    CapExceeded,
}

/// Exhaustive witness search gives up above this size of `J'`.
const WITNESS_CAP: usize = 20;

/// Evaluates the hypothesis with the given witness set, reporting every
/// sub-check whether or not it holds.
pub fn check_with(
    t: &LabeledTree,
    p: &TreeProfile,
    d: &Decomposition,
    witness: &BTreeSet<usize>,
) -> Result<HypothesisCertificate, HypothesisError> {
    if witness.is_empty() {
        return Err(HypothesisError::EmptyWitness);
    }
    if let Some(&v) = witness.iter().find(|v| !d.jprime.contains(v)) {
        return Err(HypothesisError::NotSubsetOfJprime(v));
    }
    let forest = induced_forest(t, p, witness).expect("witness is a subset of A");
    let tree_check = forest.is_tree();
    let per_vertex: Vec<PerVertexCheck> = witness
        .iter()
        .map(|&v| PerVertexCheck { v, a: d.a_count(v), t: p.excess_of(v) })
        .collect();
    let lhs: usize = per_vertex.iter().map(|c| c.a).sum();
    let rhs: i64 = 2 + per_vertex.iter().map(|c| c.t as i64 - 1).sum::<i64>();
    let (excess_ok, neighborhood_ok) = if witness.len() > 1 {
        let excess = per_vertex.iter().all(|c| c.a <= c.t);
        let mids: Vec<usize> = forest
            .vertices()
            .iter()
            .copied()
            .filter(|v| !witness.contains(v))
            .collect();
        let mut nbrs: BTreeSet<usize> = BTreeSet::new();
        for &x in &mids {
            nbrs.extend(t.neighbors(x).iter().copied());
        }
        (Some(excess), Some(&nbrs == witness))
    } else {
        (None, None)
    };
    Ok(HypothesisCertificate {
        witness: witness.iter().copied().collect(),
        lhs,
        rhs,
        tree_check,
        per_vertex,
        excess_ok,
        neighborhood_ok,
    })
}

/// Searches for a witness: first singletons `{v}` with `a_v > t_v`, then
/// all of `J'`, then every subset of `J'` by increasing size in
/// lexicographic order. The first valid certificate wins.
pub fn find_witness(t: &LabeledTree, p: &TreeProfile, d: &Decomposition) -> WitnessSearch {
    let jprime: Vec<usize> = d.jprime.iter().copied().collect();
    for &v in &jprime {
        if d.a_count(v) > p.excess_of(v) {
            let cert = check_with(t, p, d, &BTreeSet::from([v])).unwrap();
            debug_assert!(cert.is_valid());
            return WitnessSearch::Found(cert);
        }
    }
    if !jprime.is_empty() {
        let cert = check_with(t, p, d, &d.jprime).unwrap();
        if cert.is_valid() {
            return WitnessSearch::Found(cert);
        }
    }
    if jprime.is_empty() {
        return WitnessSearch::NoWitness;
    }
    if jprime.len() > WITNESS_CAP {
        return WitnessSearch::CapExceeded;
    }
    for size in 1..=jprime.len() {
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        while let Some((start, chosen)) = stack.pop() {
            if chosen.len() == size {
                let set: BTreeSet<usize> = chosen.iter().copied().collect();
                let cert = check_with(t, p, d, &set).unwrap();
                if cert.is_valid() {
                    return WitnessSearch::Found(cert);
                }
                continue;
            }
            // push in reverse so lexicographically first pops first
            let remaining = size - chosen.len();
            let hi = jprime.len() - remaining;
            for i in (start..=hi).rev() {
                let mut next = chosen.clone();
                next.push(jprime[i]);
                stack.push((i + 1, next));
            }
        }
    }
    WitnessSearch::NoWitness
}

/// Shrinks a multi-vertex witness `I` to `I' ⊆ I` that still satisfies the
/// hypothesis and additionally has `a_i <= t_i + 1 - deg_{T^{I'}}(v_i)` for
/// every member. Root, violator ties, and kept children are all resolved
/// toward the lowest label.
pub fn refine(
    t: &LabeledTree,
    p: &TreeProfile,
    d: &Decomposition,
    witness: &BTreeSet<usize>,
) -> Result<Vec<usize>, HypothesisError> {
    let cert = check_with(t, p, d, witness)?;
    if !cert.is_valid() {
        return Err(HypothesisError::InvalidWitness("hypothesis fails with this set".into()));
    }
    if witness.len() < 2 {
        return Err(HypothesisError::InvalidWitness("refinement needs |I| > 1".into()));
    }
    let root = *witness.iter().next().unwrap();
    let a_of = |v: usize| d.a_count(v);
    let t_of = |v: usize| p.excess_of(v) as i64;

    let mut iprime: BTreeSet<usize> = witness.clone();
    // the loop between the removal step and the violator scan runs at most
    // |A| times; one extra pass covers the final keep-children step
    for _ in 0..=p.l + 2 {
        let forest = induced_forest(t, p, &iprime).expect("I' stays inside A");
        debug_assert!(forest.is_tree());
        let deg = |v: usize| forest.degree(v) as i64;

        // Step 0: done once every member satisfies the degree inequality.
        let violators: Vec<usize> = iprime
            .iter()
            .copied()
            .filter(|&v| (a_of(v) as i64) > t_of(v) + 1 - deg(v))
            .collect();
        if violators.is_empty() {
            return Ok(iprime.iter().copied().collect());
        }

        // Step 1: take the violator farthest from the root and drop every
        // child subtree whose members satisfy `Σ a_i <= Σ (t_i - 1)`.
        let dist = forest.distances_from(root);
        let u = violators
            .iter()
            .copied()
            .max_by_key(|&v| (dist[&v], std::cmp::Reverse(v)))
            .unwrap();
        let below = subtree_members(&forest, root, u);
        let children: Vec<usize> = forest
            .neighbors(u)
            .iter()
            .copied()
            .filter(|w| below.contains(w))
            .collect();
        let mut removed = false;
        for &w in &children {
            let members = subtree_members(&forest, root, w);
            let i_w: Vec<usize> = iprime.iter().copied().filter(|v| members.contains(v)).collect();
            let a_sum: i64 = i_w.iter().map(|&v| a_of(v) as i64).sum();
            let t_sum: i64 = i_w.iter().map(|&v| t_of(v) - 1).sum();
            if a_sum <= t_sum {
                for v in i_w {
                    iprime.remove(&v);
                }
                removed = true;
            }
        }
        if removed {
            let forest = induced_forest(t, p, &iprime).expect("I' stays inside A");
            if (a_of(u) as i64) <= t_of(u) + 1 - forest.degree(u) as i64 {
                continue;
            }
        }

        // Step 2: restrict to the subtree at u and keep s of its children.
        let forest = induced_forest(t, p, &iprime).expect("I' stays inside A");
        let below = subtree_members(&forest, root, u);
        iprime.retain(|v| below.contains(v));
        let children: Vec<usize> = forest
            .neighbors(u)
            .iter()
            .copied()
            .filter(|w| below.contains(w))
            .collect();
        let s = t_of(u) + 1 - a_of(u) as i64;
        debug_assert!(s >= 1 && (s as usize) <= children.len());
        let mut keep: BTreeSet<usize> = BTreeSet::from([u]);
        for &w in children.iter().take(s as usize) {
            let members = subtree_members(&forest, root, w);
            keep.extend(iprime.iter().copied().filter(|v| members.contains(v)));
        }
        iprime = keep;
    }
    unreachable!("refinement exceeded its iteration bound");
}

/// Vertices of the subtree hanging below `v` when `f` is rooted at `r`
/// (including `v` itself).
fn subtree_members(
    f: &crate::decompose::InducedForest,
    r: usize,
    v: usize,
) -> BTreeSet<usize> {
    let dist = f.distances_from(r);
    let mut keep = BTreeSet::from([v]);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        for &w in f.neighbors(u) {
            if dist[&w] == dist[&u] + 1 && keep.insert(w) {
                stack.push(w);
            }
        }
    }
    keep
}
