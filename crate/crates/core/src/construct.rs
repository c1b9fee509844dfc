//! Generators for trees with prescribed `(m, l, delta)`: the canonical
//! family member, lobsters grown from caterpillars, the two-tree
//! combination that preserves the hypothesis, and the always-embeddable
//! member every nonempty family contains.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decompose::{decompose, induced_forest};
use crate::graph::Graph;
use crate::hypothesis::{find_witness, HypothesisCertificate, WitnessSearch};
use crate::tree::{family_feasible, profile, LabeledTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("infeasible family: {0}")]
    InfeasibleFamily(String),
    #[error("invalid caterpillar spec: {0}")]
    SpecInvalid(String),
    #[error("the left tree does not satisfy the hypothesis")]
    HypothesisMissing,
    #[error("delta mismatch: {left} vs {right}")]
    DeltaMismatch { left: usize, right: usize },
    #[error("combination requires delta > 1")]
    DeltaIsOne,
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("internal construction defect: {0}")]
    Internal(String),
}

/// Caterpillar `C_k(d_1, ..., d_k)`: a spine path on `k` vertices with
/// `d_i` leaves attached to the i-th spine vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaterpillarSpec {
    pub spine: usize,
    pub leaves: Vec<usize>,
}

impl CaterpillarSpec {
    pub fn new(leaves: Vec<usize>) -> Result<Self, ConstructError> {
        if leaves.is_empty() {
            return Err(ConstructError::SpecInvalid("spine must have at least one vertex".into()));
        }
        Ok(CaterpillarSpec { spine: leaves.len(), leaves })
    }

    pub fn build(&self) -> LabeledTree {
        let m = self.spine + self.leaves.iter().sum::<usize>();
        let mut g = Graph::empty(m);
        for i in 1..self.spine {
            g.add_edge(i - 1, i).unwrap();
        }
        let mut next = self.spine;
        for (i, &count) in self.leaves.iter().enumerate() {
            for _ in 0..count {
                g.add_edge(i, next).unwrap();
                next += 1;
            }
        }
        LabeledTree::from_graph(g).expect("caterpillars are trees")
    }
}

/// The canonical member of the `(m, l, delta)` family: each of the `l + 1`
/// small-side vertices gets `delta - 1` private leaves, one hub vertex is
/// adjacent to all of them, and the leftover `m - (l+1)delta - 1` vertices
/// hang off vertex 0 as extra leaves.
pub fn canonical_member(m: usize, l: usize, delta: usize) -> Result<LabeledTree, ConstructError> {
    if !family_feasible(m, l, delta) {
        return Err(ConstructError::InfeasibleFamily(format!(
            "no tree has (m, l, delta) = ({}, {}, {})",
            m, l, delta
        )));
    }
    let hub = l + 1;
    let mut g = Graph::empty(m);
    let mut next = l + 2;
    for v in 0..=l {
        g.add_edge(v, hub).unwrap();
        for _ in 0..delta - 1 {
            g.add_edge(v, next).unwrap();
            next += 1;
        }
    }
    while next < m {
        g.add_edge(0, next).unwrap();
        next += 1;
    }
    let t = LabeledTree::from_graph(g).expect("construction is a tree");
    debug_assert_eq!(
        (profile(&t).m, profile(&t).l, profile(&t).delta),
        (m, l, delta)
    );
    Ok(t)
}

/// Builds the caterpillar and attaches `d` pendant edges to each of its
/// leaves lying in the smaller partite set.
pub fn lobster_from_caterpillar(
    spec: &CaterpillarSpec,
    d: usize,
) -> Result<LabeledTree, ConstructError> {
    if spec.leaves.len() != spec.spine {
        return Err(ConstructError::SpecInvalid("one leaf count per spine vertex".into()));
    }
    let caterpillar = spec.build();
    let p = profile(&caterpillar);
    let targets: Vec<usize> = p
        .a
        .iter()
        .copied()
        .filter(|&v| caterpillar.degree(v) <= 1)
        .collect();
    let m0 = caterpillar.vertex_count();
    let mut g = Graph::empty(m0 + d * targets.len());
    for (u, v) in caterpillar.graph().edges() {
        g.add_edge(u, v).unwrap();
    }
    let mut next = m0;
    for &v in &targets {
        for _ in 0..d {
            g.add_edge(v, next).unwrap();
            next += 1;
        }
    }
    Ok(LabeledTree::from_graph(g).expect("pendant additions preserve the tree property"))
}

/// Joins two trees of the same `delta > 1` by one new edge from a chosen
/// big-side vertex of the first tree to the smallest small-side vertex of
/// the second, giving a member of the `(m1 + m2, l1 + l2 + 1, delta)`
/// family that satisfies the hypothesis. The attachment point follows the
/// three structural cases of the first tree's core set.
pub fn combine(
    t1: &LabeledTree,
    t2: &LabeledTree,
) -> Result<(LabeledTree, HypothesisCertificate), ConstructError> {
    let p1 = profile(t1);
    let p2 = profile(t2);
    if p1.delta != p2.delta {
        return Err(ConstructError::DeltaMismatch { left: p1.delta, right: p2.delta });
    }
    if p1.delta <= 1 {
        return Err(ConstructError::DeltaIsOne);
    }
    let d1 = decompose(t1, &p1);
    match find_witness(t1, &p1, &d1) {
        WitnessSearch::Found(_) => {}
        _ => return Err(ConstructError::HypothesisMissing),
    }

    let w = attachment_point(t1, &p1, &d1)?;
    let m1 = p1.m;
    let a2_min = *p2.a.first().expect("small side is nonempty");

    let mut g = Graph::empty(m1 + p2.m);
    for (u, v) in t1.graph().edges() {
        g.add_edge(u, v).unwrap();
    }
    for (u, v) in t2.graph().edges() {
        g.add_edge(u + m1, v + m1).unwrap();
    }
    g.add_edge(w, a2_min + m1).unwrap();
    let t = LabeledTree::from_graph(g).expect("joining two trees by an edge yields a tree");

    let p = profile(&t);
    if (p.m, p.l, p.delta) != (p1.m + p2.m, p1.l + p2.l + 1, p1.delta) {
        return Err(ConstructError::Internal(format!(
            "combined profile ({}, {}, {}) differs from the predicted one",
            p.m, p.l, p.delta
        )));
    }
    let d = decompose(&t, &p);
    match find_witness(&t, &p, &d) {
        WitnessSearch::Found(cert) => Ok((t, cert)),
        other => Err(ConstructError::Internal(format!(
            "combined tree lost the hypothesis: {:?}",
            other
        ))),
    }
}

/// The big-side vertex of `t1` that receives the new edge:
/// (i) a pendant leaf of a core vertex, else (ii) a non-forest neighbor of
/// a core-forest leaf with slack, else (iii) any neighbor of the lone core
/// vertex. Ties always resolve to the lowest label.
fn attachment_point(
    t1: &LabeledTree,
    p1: &crate::tree::TreeProfile,
    d1: &crate::decompose::Decomposition,
) -> Result<usize, ConstructError> {
    // case (i)
    for &u in &d1.jprime {
        if let Some(&leaf) = t1.neighbors(u).iter().find(|&&x| t1.degree(x) == 1) {
            return Ok(leaf);
        }
    }
    let forest = induced_forest(t1, p1, &d1.jprime).expect("J' is inside A");
    if d1.jprime.len() > 1 {
        // case (ii): every core-forest leaf now has a_u > t_u
        let mut forest_leaves: Vec<usize> = forest
            .vertices()
            .iter()
            .copied()
            .filter(|&v| d1.jprime.contains(&v) && forest.degree(v) == 1)
            .filter(|&v| d1.a_count(v) > p1.excess_of(v))
            .collect();
        forest_leaves.sort_unstable();
        if forest_leaves.len() >= 2 {
            let u1 = forest_leaves[0];
            let in_forest: BTreeSet<usize> =
                forest.neighbors(u1).iter().copied().collect();
            if let Some(&w) = t1.neighbors(u1).iter().find(|x| !in_forest.contains(x)) {
                return Ok(w);
            }
        }
    } else if let Some(&u) = d1.jprime.iter().next() {
        // case (iii): singleton core with no adjacent leaf
        if d1.a_count(u) > p1.excess_of(u) + 1 {
            return Ok(t1.neighbors(u)[0]);
        }
    }
    Err(ConstructError::Internal(
        "no attachment case applies; the structural claim is violated".into(),
    ))
}

/// A member of the nonempty `(m, l, delta)` family, `l >= 2` and
/// `delta > 1`, that provably embeds into `K̄_l ∨ m S_δ`: directly the
/// canonical member when the excess is small, otherwise a combination
/// anchored at the smallest admissible left factor, falling back to a
/// chain construction when the remainder family is empty.
///
/// Families with `l = 0` or `delta = 1` never embed into the star host.
/// Neither do families with `l = 1` and positive excess: their two
/// small-side vertices sit at distance 2, the host's lone join vertex can
/// absorb the neighborhood overflow of at most one of them, and every
/// part-2 vertex has degree at most `delta`, so excess degrees cannot be
/// placed at all.
pub fn embeddable_member(m: usize, l: usize, delta: usize) -> Result<LabeledTree, ConstructError> {
    if l == 0 || delta <= 1 {
        return Err(ConstructError::UnsupportedParameters(format!(
            "families with l = {} and delta = {} never embed into the star host",
            l, delta
        )));
    }
    if !family_feasible(m, l, delta) {
        return Err(ConstructError::InfeasibleFamily(format!(
            "no tree has (m, l, delta) = ({}, {}, {})",
            m, l, delta
        )));
    }
    if m < (l + 1) * (delta + 1) {
        return canonical_member(m, l, delta);
    }
    if l == 1 {
        return Err(ConstructError::UnsupportedParameters(
            "l = 1 with excess at least 1: no family member embeds into the star host".into(),
        ));
    }
    // smallest admissible left factor: l1 = 1, m1 = 2 delta + 1
    let m1 = 2 * delta + 1;
    let (m2, l2) = (m - m1, l - 2);
    if family_feasible(m2, l2, delta) {
        let t1 = canonical_member(m1, 1, delta)?;
        let t2 = match embeddable_member(m2, l2, delta) {
            Ok(t) => t,
            Err(_) => canonical_member(m2, l2, delta)?,
        };
        combine(&t1, &t2).map(|(t, _)| t)
    } else {
        // l = 2 with m past the star-remainder point: no two-factor split
        // exists, so build the chain member directly
        chain_member(m, l, delta)
    }
}

/// A chain of small-side vertices linked through middles, with all excess
/// loaded on one end: the interior vertex next to the light end always
/// gives a singleton witness, so the tree embeds for every feasible `m`
/// once `l >= 2`.
fn chain_member(m: usize, l: usize, delta: usize) -> Result<LabeledTree, ConstructError> {
    debug_assert!(l >= 2 && delta >= 2 && family_feasible(m, l, delta));
    let t_excess = m - 1 - (l + 1) * delta;
    let mut g = Graph::empty(m);
    // A-vertices 0..=l, middles l+1..=2l; middle l+i joins i-1 and i
    for i in 1..=l {
        g.add_edge(i - 1, l + i).unwrap();
        g.add_edge(l + i, i).unwrap();
    }
    let mut next = 2 * l + 1;
    let pad = |g: &mut Graph, v: usize, count: usize, next: &mut usize| {
        for _ in 0..count {
            g.add_edge(v, *next).unwrap();
            *next += 1;
        }
    };
    pad(&mut g, 0, delta - 1 + t_excess, &mut next);
    for v in 1..l {
        pad(&mut g, v, delta - 2, &mut next);
    }
    pad(&mut g, l, delta - 1, &mut next);
    debug_assert_eq!(next, m);
    let t = LabeledTree::from_graph(g).expect("the chain is a tree");
    debug_assert_eq!((profile(&t).m, profile(&t).l, profile(&t).delta), (m, l, delta));
    Ok(t)
}

/// Seeded random member of a family with `t < l`: a random bipartite
/// skeleton over the small side and a connector set `B'`, padded with leaf
/// neighborhoods so every small-side degree reaches `delta` and one vertex
/// attains it exactly.
pub fn random_member(
    m: usize,
    l: usize,
    delta: usize,
    seed: u64,
) -> Result<LabeledTree, ConstructError> {
    if !family_feasible(m, l, delta) {
        return Err(ConstructError::InfeasibleFamily(format!(
            "no tree has (m, l, delta) = ({}, {}, {})",
            m, l, delta
        )));
    }
    if l == 0 || m >= (l + 1) * (delta + 1) {
        return Err(ConstructError::UnsupportedParameters(
            "the generator covers families with l >= 1 and t < l".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..200 {
        let b_max = l.min(m - l - 1);
        let b = rng.gen_range(1..=b_max);
        // random bipartite skeleton on A (0..=l) and B' (l+1..l+b)
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut placed_a = vec![0usize];
        let mut placed_b: Vec<usize> = Vec::new();
        let mut pending: Vec<usize> = (1..=l).chain(l + 1..=l + b).collect();
        // visit pending in random order, attaching to the opposite class
        while !pending.is_empty() {
            let i = rng.gen_range(0..pending.len());
            let v = pending.swap_remove(i);
            if v <= l {
                if placed_b.is_empty() {
                    pending.push(v);
                    continue;
                }
                let w = placed_b[rng.gen_range(0..placed_b.len())];
                edges.push((v, w));
                placed_a.push(v);
            } else {
                let w = placed_a[rng.gen_range(0..placed_a.len())];
                edges.push((v, w));
                placed_b.push(v);
            }
        }
        let mut skeleton_deg = vec![0usize; l + 1];
        for &(u, v) in &edges {
            let a = u.min(v);
            if a <= l {
                skeleton_deg[a] += 1;
            }
        }
        if skeleton_deg.iter().all(|&k| k > delta) {
            continue;
        }
        let needed: Vec<usize> =
            skeleton_deg.iter().map(|&k| delta.saturating_sub(k)).collect();
        let total_needed: usize = needed.iter().sum();
        let b2 = m - (l + 1) - b;
        if b2 < total_needed {
            continue;
        }
        // one small-side vertex keeps degree exactly delta
        let anchor = (0..=l)
            .filter(|&v| skeleton_deg[v] <= delta)
            .min_by_key(|&v| (skeleton_deg[v], v))
            .unwrap();
        let mut extra = vec![0usize; l + 1];
        for _ in 0..b2 - total_needed {
            let mut v = rng.gen_range(0..=l);
            if v == anchor {
                v = (v + 1) % (l + 1);
            }
            extra[v] += 1;
        }
        let mut g = Graph::empty(m);
        for &(u, v) in &edges {
            g.add_edge(u, v).unwrap();
        }
        let mut next = l + 1 + b;
        for v in 0..=l {
            for _ in 0..needed[v] + extra[v] {
                g.add_edge(v, next).unwrap();
                next += 1;
            }
        }
        let t = match LabeledTree::from_graph(g) {
            Ok(t) => t,
            Err(_) => continue,
        };
        let p = profile(&t);
        if (p.m, p.l, p.delta) == (m, l, delta) {
            return Ok(t);
        }
    }
    Err(ConstructError::Internal("random generator exhausted its attempts".into()))
}
