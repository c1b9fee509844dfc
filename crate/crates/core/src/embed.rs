//! Embedding trees into join hosts `H1 ∨ H2`: the constructive high-degree
//! placement, the staged placement into `K̄_l ∨ m S_δ` driven by a
//! hypothesis witness, structural non-embeddability certificates, and an
//! exact backtracking search used as the ground-truth oracle.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::decompose::{induced_forest, Decomposition};
use crate::hypothesis::{check_with, refine, HypothesisCertificate};
use crate::graph::Graph;
use crate::tree::{LabeledTree, TreeProfile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbedError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("conditions not met: {0}")]
    ConditionsNotMet(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),
    #[error("search budget exceeded after {expanded} expansions")]
    BudgetExceeded { expanded: u64 },
}

/// Default node budget for the exact search.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HostStructure {
    General,
    /// `part2` is exactly `copies` disjoint stars on `star_order` vertices
    /// each (a center plus `star_order - 1` leaves).
    StarPack { copies: usize, star_order: usize },
}

/// A host graph presented as `part1 ∨ part2`. Vertices of `part1` come
/// first, then `part2`, and every cross edge is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinHost {
    pub part1: Graph,
    pub part2: Graph,
    pub structure: HostStructure,
}

impl JoinHost {
    pub fn general(part1: Graph, part2: Graph) -> Self {
        JoinHost { part1, part2, structure: HostStructure::General }
    }

    /// `K̄_l ∨ m S_δ`: `l` isolated vertices joined to `m` disjoint stars
    /// `S_δ = K_{1,δ-1}`. Star `i` occupies the label block starting at
    /// `l + i·δ`, center first.
    pub fn star_pack(l: usize, copies: usize, delta: usize) -> Self {
        assert!(delta >= 1);
        let mut part2 = Graph::empty(copies * delta);
        for i in 0..copies {
            let c = i * delta;
            for leaf in 1..delta {
                part2.add_edge(c, c + leaf).unwrap();
            }
        }
        JoinHost {
            part1: Graph::empty(l),
            part2,
            structure: HostStructure::StarPack { copies, star_order: delta },
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.part1.vertex_count() + self.part2.vertex_count()
    }

    pub fn part2_offset(&self) -> usize {
        self.part1.vertex_count()
    }

    /// Global labels of the star centers; defined only for star packs.
    pub fn star_centers(&self) -> Vec<usize> {
        match self.structure {
            HostStructure::StarPack { copies, star_order } => {
                let off = self.part2_offset();
                (0..copies).map(|i| off + i * star_order).collect()
            }
            HostStructure::General => panic!("star_centers on a general host"),
        }
    }

    pub fn to_graph(&self) -> Graph {
        Graph::join(&self.part1, &self.part2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedMethod {
    HighDegreeJoin,
    StarHostStaged,
    Backtracking,
}

impl EmbedMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EmbedMethod::HighDegreeJoin => "high_degree_join",
            EmbedMethod::StarHostStaged => "star_host_staged",
            EmbedMethod::Backtracking => "backtracking",
        }
    }
}

/// An injective, edge-preserving map from tree vertices to host vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingMap {
    /// `map[tree_vertex] = host_vertex`
    pub map: Vec<usize>,
    pub method: EmbedMethod,
}

/// True iff the map is injective and every tree edge lands on a host edge.
pub fn verify_embedding(t: &LabeledTree, host: &Graph, map: &[usize]) -> bool {
    if map.len() != t.vertex_count() {
        return false;
    }
    if map.iter().any(|&h| h >= host.vertex_count()) {
        return false;
    }
    let mut seen = vec![false; host.vertex_count()];
    for &h in map {
        if seen[h] {
            return false;
        }
        seen[h] = true;
    }
    t.graph().edges().iter().all(|&(u, v)| host.has_edge(map[u], map[v]))
}

/// Streams host vertices from a pool in ascending label order, skipping
/// used ones.
struct Pool {
    items: Vec<usize>,
    next: usize,
}

impl Pool {
    fn new(items: Vec<usize>) -> Self {
        Pool { items, next: 0 }
    }

    fn take(&mut self, used: &[bool]) -> Option<usize> {
        while self.next < self.items.len() {
            let h = self.items[self.next];
            self.next += 1;
            if !used[h] {
                return Some(h);
            }
        }
        None
    }
}

struct Placement {
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Placement {
    fn new(m: usize, n: usize) -> Self {
        Placement { map: vec![None; m], used: vec![false; n] }
    }

    fn put(&mut self, tree_v: usize, host_v: usize) -> Result<(), EmbedError> {
        if self.map[tree_v].is_some() || self.used[host_v] {
            return Err(EmbedError::InternalVerificationFailed(format!(
                "double placement of tree vertex {} or host vertex {}",
                tree_v, host_v
            )));
        }
        self.map[tree_v] = Some(host_v);
        self.used[host_v] = true;
        Ok(())
    }

    fn placed(&self, tree_v: usize) -> bool {
        self.map[tree_v].is_some()
    }

    fn finish(self, method: EmbedMethod) -> Result<EmbeddingMap, EmbedError> {
        let map: Option<Vec<usize>> = self.map.into_iter().collect();
        match map {
            Some(map) => Ok(EmbeddingMap { map, method }),
            None => Err(EmbedError::InternalVerificationFailed(
                "placement left tree vertices unmapped".into(),
            )),
        }
    }
}

/// Embeds any member of the family into `H1 ∨ H2` provided `Δ(H2) ≥ δ`:
/// a minimum-degree vertex of the smaller partite set goes to a part-2
/// vertex of degree at least `δ`, its neighbors into that vertex's
/// neighborhood, the rest of the large side into part 2, and the rest of
/// the small side into part 1.
pub fn embed_highdeg_join(
    t: &LabeledTree,
    p: &TreeProfile,
    host: &JoinHost,
) -> Result<EmbeddingMap, EmbedError> {
    let l = host.part1.vertex_count();
    let n = host.vertex_count();
    if l != p.l {
        return Err(EmbedError::PreconditionFailed(format!(
            "part1 has {} vertices, expected l = {}",
            l, p.l
        )));
    }
    if n < p.m {
        return Err(EmbedError::PreconditionFailed(format!("host has {} < m = {} vertices", n, p.m)));
    }
    if host.part2.max_degree() < p.delta {
        return Err(EmbedError::PreconditionFailed(format!(
            "max degree {} of part2 is below delta = {}",
            host.part2.max_degree(),
            p.delta
        )));
    }
    let off = host.part2_offset();
    let hg = host.to_graph();
    let mut pl = Placement::new(p.m, n);

    let &v = p
        .a
        .iter()
        .min_by_key(|&&v| (t.degree(v), v))
        .expect("A is nonempty");
    debug_assert_eq!(t.degree(v), p.delta);
    let vstar_local = (0..host.part2.vertex_count())
        .find(|&w| host.part2.degree(w) >= p.delta)
        .expect("checked above");
    pl.put(v, off + vstar_local)?;

    let mut star_nbrs = Pool::new(
        host.part2.neighbors(vstar_local).iter().map(|&w| off + w).collect(),
    );
    for &b in t.neighbors(v) {
        let h = star_nbrs.take(&pl.used).ok_or_else(|| {
            EmbedError::InternalVerificationFailed("neighborhood of v* exhausted".into())
        })?;
        pl.put(b, h)?;
    }
    let mut part2_pool = Pool::new((off..n).collect());
    for &b in &p.b {
        if !pl.placed(b) {
            let h = part2_pool.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("part2 exhausted".into())
            })?;
            pl.put(b, h)?;
        }
    }
    let mut part1_pool = Pool::new((0..l).collect());
    for &a in &p.a {
        if !pl.placed(a) {
            let h = part1_pool.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("part1 exhausted".into())
            })?;
            pl.put(a, h)?;
        }
    }
    let map = pl.finish(EmbedMethod::HighDegreeJoin)?;
    if !verify_embedding(t, &hg, &map.map) {
        return Err(EmbedError::InternalVerificationFailed(
            "high-degree placement failed verification".into(),
        ));
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingRow {
    /// Number of small-side vertices hypothetically mapped into part 2.
    pub p: usize,
    /// Lower bound on their joint neighborhood size: `p(δ-1) + 1`.
    pub min_neighbors: usize,
    /// Most of those neighbors part 2 can hold: `p(δ-2) + 1`.
    pub part2_capacity: i64,
    /// Neighbors forced into part 1, at least `p`.
    pub forced_into_part1: i64,
}

/// Certificate that no member of the family embeds into the host.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonembeddabilityCert {
    pub delta: usize,
    pub l: usize,
    pub part2_max_degree: usize,
    pub degree_delta_minus_1_count: usize,
    pub rows: Vec<CountingRow>,
}

/// Certifies non-embeddability when `Δ(H2) ≤ δ - 1` and at most one part-2
/// vertex has degree `δ - 1`. The rows record the counting argument: for
/// every way of mapping `p ≥ 1` small-side vertices into part 2, at least
/// `p` of their neighbors overflow into part 1, which then cannot hold the
/// remaining `l + 1 - p` small-side vertices.
pub fn certify_nonembeddable(
    _t: &LabeledTree,
    p: &TreeProfile,
    host: &JoinHost,
) -> Result<NonembeddabilityCert, EmbedError> {
    certify_profile_nonembeddable(p, host)
}

/// The certificate depends only on the profile; the tree argument above
/// exists because the statement is about a particular forbidden tree.
pub(crate) fn certify_profile_nonembeddable(
    p: &TreeProfile,
    host: &JoinHost,
) -> Result<NonembeddabilityCert, EmbedError> {
    let l = host.part1.vertex_count();
    if l != p.l {
        return Err(EmbedError::PreconditionFailed(format!(
            "part1 has {} vertices, expected l = {}",
            l, p.l
        )));
    }
    let dmax = host.part2.max_degree();
    if dmax >= p.delta {
        return Err(EmbedError::ConditionsNotMet(format!(
            "part2 max degree {} is not below delta = {}",
            dmax, p.delta
        )));
    }
    let count = (0..host.part2.vertex_count())
        .filter(|&v| host.part2.degree(v) + 1 == p.delta)
        .count();
    if count > 1 {
        return Err(EmbedError::ConditionsNotMet(format!(
            "{} part2 vertices have degree delta - 1",
            count
        )));
    }
    let rows = (1..=p.l + 1)
        .map(|k| {
            let min_neighbors = k * (p.delta - 1) + 1;
            let part2_capacity = k as i64 * (p.delta as i64 - 2) + 1;
            CountingRow {
                p: k,
                min_neighbors,
                part2_capacity,
                forced_into_part1: min_neighbors as i64 - part2_capacity,
            }
        })
        .collect();
    Ok(NonembeddabilityCert {
        delta: p.delta,
        l: p.l,
        part2_max_degree: dmax,
        degree_delta_minus_1_count: count,
        rows,
    })
}

/// Embeds a hypothesis-witnessed tree into `K̄_l ∨ m S_δ` (built
/// internally). The two proof cases are followed verbatim, with every
/// free choice resolved toward the lowest available label; when a slice of
/// neighbors must go to part 1, vertices with all remaining neighbors
/// bound for part 2 are preferred.
pub fn embed_star_host(
    t: &LabeledTree,
    p: &TreeProfile,
    d: &Decomposition,
    cert: &HypothesisCertificate,
) -> Result<EmbeddingMap, EmbedError> {
    if !cert.is_valid() {
        return Err(EmbedError::InvalidCertificate("certificate checks fail".into()));
    }
    if p.delta < 2 {
        // the star host for delta = 1 is complete bipartite with the small
        // part of size l, and both partite sets of the tree exceed l; a
        // witness certificate carries no embedding there
        return Err(EmbedError::InvalidCertificate(
            "no family member embeds into the star host when delta = 1".into(),
        ));
    }
    let witness: BTreeSet<usize> = cert.witness.iter().copied().collect();
    if witness.is_empty() || !witness.is_subset(&d.jprime) {
        return Err(EmbedError::InvalidCertificate("witness is not a nonempty subset of J'".into()));
    }
    let recheck = check_with(t, p, d, &witness)
        .map_err(|e| EmbedError::InvalidCertificate(e.to_string()))?;
    if !recheck.is_valid() {
        return Err(EmbedError::InvalidCertificate("certificate does not match this tree".into()));
    }
    let host = JoinHost::star_pack(p.l, p.m, p.delta);
    let hg = host.to_graph();

    let map = if witness.len() == 1 {
        let v = *witness.iter().next().unwrap();
        place_singleton(t, p, d, v, &host)?
    } else {
        let iprime = refine(t, p, d, &witness)
            .map_err(|e| EmbedError::InvalidCertificate(e.to_string()))?;
        place_staged(t, p, d, &iprime, &host)?
    };
    if !verify_embedding(t, &hg, &map.map) {
        return Err(EmbedError::InternalVerificationFailed(
            "staged placement failed verification".into(),
        ));
    }
    Ok(map)
}

fn common_neighbor(t: &LabeledTree, u: usize, v: usize) -> Option<usize> {
    t.neighbors(u).iter().copied().find(|&x| t.graph().has_edge(x, v))
}

fn star_leaves(host: &JoinHost, center: usize) -> Vec<usize> {
    let off = host.part2_offset();
    host.part2.neighbors(center - off).iter().map(|&w| off + w).collect()
}

fn place_singleton(
    t: &LabeledTree,
    p: &TreeProfile,
    d: &Decomposition,
    v: usize,
    host: &JoinHost,
) -> Result<EmbeddingMap, EmbedError> {
    let n = host.vertex_count();
    let mut pl = Placement::new(p.m, n);
    let centers = host.star_centers();
    let t_v = p.excess_of(v);
    let a_v: Vec<usize> = d.ai[&v].iter().copied().collect();
    debug_assert!(a_v.len() > t_v);

    let u = centers[0];
    pl.put(v, u)?;
    // A'_v: the t_v + 1 lowest-labeled distance-2 vertices, onto fresh centers
    let aprime = &a_v[..t_v + 1];
    for (&w, &c) in aprime.iter().zip(&centers[1..]) {
        pl.put(w, c)?;
    }
    // their common neighbors with v go to part 1
    let mut h1 = Pool::new((0..p.l).collect());
    for &w in aprime {
        let x = common_neighbor(t, v, w).expect("distance-2 vertices share a neighbor");
        let h = h1.take(&pl.used).ok_or_else(|| {
            EmbedError::InternalVerificationFailed("part1 exhausted placing common neighbors".into())
        })?;
        pl.put(x, h)?;
    }
    // remaining neighbors of v fill u's star leaves
    let mut u_leaves = Pool::new(star_leaves(host, u));
    for &b in t.neighbors(v) {
        if !pl.placed(b) {
            let h = u_leaves.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("star of v exhausted".into())
            })?;
            pl.put(b, h)?;
        }
    }
    // remaining neighbors of each A'_v member fill that member's star
    for &w in aprime {
        let center = pl.map[w].unwrap();
        let mut leaves = Pool::new(star_leaves(host, center));
        for &b in t.neighbors(w) {
            if !pl.placed(b) {
                let h = leaves.take(&pl.used).ok_or_else(|| {
                    EmbedError::InternalVerificationFailed("star of A'_v member exhausted".into())
                })?;
                pl.put(b, h)?;
            }
        }
    }
    finish_common(t, p, pl, host, EmbedMethod::StarHostStaged)
}

fn place_staged(
    t: &LabeledTree,
    p: &TreeProfile,
    d: &Decomposition,
    iprime: &[usize],
    host: &JoinHost,
) -> Result<EmbeddingMap, EmbedError> {
    let n = host.vertex_count();
    let mut pl = Placement::new(p.m, n);
    let set: BTreeSet<usize> = iprime.iter().copied().collect();
    let forest = induced_forest(t, p, &set).expect("I' is a subset of A");
    debug_assert!(forest.is_tree());
    let root = iprime[0];
    let dist = forest.distances_from(root);
    let mut order: Vec<usize> = iprime.to_vec();
    order.sort_by_key(|&v| (dist[&v], v));

    // every small-side vertex bound for part 2
    let mut part2_a: BTreeSet<usize> = set.clone();
    for &v in iprime {
        part2_a.extend(d.ai[&v].iter().copied());
    }

    let centers = host.star_centers();
    let mut center_pool = Pool::new(centers);
    let mut h1 = Pool::new((0..p.l).collect());

    // witness members onto star centers
    for &v in &order {
        let c = center_pool.take(&pl.used).ok_or_else(|| {
            EmbedError::InternalVerificationFailed("ran out of star centers".into())
        })?;
        pl.put(v, c)?;
    }
    // middles of the witness forest into part 1
    for &v in &order {
        for &x in forest.neighbors(v) {
            if !pl.placed(x) {
                let h = h1.take(&pl.used).ok_or_else(|| {
                    EmbedError::InternalVerificationFailed("part1 exhausted on forest middles".into())
                })?;
                pl.put(x, h)?;
            }
        }
    }
    // distance-2 classes onto fresh centers
    for &v in &order {
        for &w in &d.ai[&v] {
            let c = center_pool.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("ran out of star centers for classes".into())
            })?;
            pl.put(w, c)?;
        }
    }
    // common neighbors into part 1
    for &v in &order {
        for &w in &d.ai[&v] {
            let x = common_neighbor(t, v, w).expect("class members sit at distance 2");
            let h = h1.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("part1 exhausted on common neighbors".into())
            })?;
            pl.put(x, h)?;
        }
    }
    // per-member slice into part 1, remainder onto own star leaves
    for &v in &order {
        let d_v = forest.degree(v) as i64;
        let a_v = d.ai[&v].len() as i64;
        let t_v = p.excess_of(v) as i64;
        let s = t_v + 1 - d_v - a_v;
        if s < 0 {
            return Err(EmbedError::InternalVerificationFailed(format!(
                "refined witness violates the degree inequality at {}",
                v
            )));
        }
        let mut rest: Vec<usize> =
            t.neighbors(v).iter().copied().filter(|&b| !pl.placed(b)).collect();
        // prefer slice vertices whose own neighbors all map into part 2
        rest.sort_by_key(|&b| {
            let clean = t.neighbors(b).iter().all(|w| part2_a.contains(w));
            (!clean, b)
        });
        let (slice, leaves_part) = rest.split_at(s as usize);
        for &b in slice {
            let h = h1.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("part1 exhausted on neighbor slices".into())
            })?;
            pl.put(b, h)?;
        }
        let mut leaves = Pool::new(star_leaves(host, pl.map[v].unwrap()));
        for &b in leaves_part {
            let h = leaves.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("star leaves exhausted".into())
            })?;
            pl.put(b, h)?;
        }
    }
    // class members' remaining neighbors onto their own star leaves
    for &v in &order {
        for &w in &d.ai[&v] {
            let mut leaves = Pool::new(star_leaves(host, pl.map[w].unwrap()));
            for &b in t.neighbors(w) {
                if !pl.placed(b) {
                    let h = leaves.take(&pl.used).ok_or_else(|| {
                        EmbedError::InternalVerificationFailed("class star leaves exhausted".into())
                    })?;
                    pl.put(b, h)?;
                }
            }
        }
    }
    finish_common(t, p, pl, host, EmbedMethod::StarHostStaged)
}

/// Shared tail of both star-host cases: remaining small-side vertices into
/// part 1, remaining large-side vertices anywhere free in part 2.
fn finish_common(
    t: &LabeledTree,
    p: &TreeProfile,
    mut pl: Placement,
    host: &JoinHost,
    method: EmbedMethod,
) -> Result<EmbeddingMap, EmbedError> {
    let _ = t;
    let mut h1 = Pool::new((0..p.l).collect());
    for &a in &p.a {
        if !pl.placed(a) {
            let h = h1.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("part1 exhausted on remaining A".into())
            })?;
            pl.put(a, h)?;
        }
    }
    let mut part2 = Pool::new((host.part2_offset()..host.vertex_count()).collect());
    for &b in &p.b {
        if !pl.placed(b) {
            let h = part2.take(&pl.used).ok_or_else(|| {
                EmbedError::InternalVerificationFailed("part2 exhausted on remaining B".into())
            })?;
            pl.put(b, h)?;
        }
    }
    pl.finish(method)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(EmbeddingMap),
    /// The search space was exhausted: no embedding exists.
    Exhausted,
}

/// Complete backtracking search for a copy of `tree` in `host`. Tree
/// vertices are placed in breadth-first order from a maximum-degree root,
/// so every later vertex attaches to its already-placed parent; candidates
/// are tried by increasing host degree, then label. `Exhausted` is a proof
/// of non-existence; running out of budget is not.
pub fn find_embedding_exact(
    tree: &LabeledTree,
    host: &Graph,
    budget: u64,
) -> Result<SearchOutcome, EmbedError> {
    let m = tree.vertex_count();
    let n = host.vertex_count();
    if m > n {
        return Ok(SearchOutcome::Exhausted);
    }
    // BFS order from the highest-degree vertex, high-degree children first
    let root = (0..m).max_by_key(|&v| (tree.degree(v), std::cmp::Reverse(v))).unwrap();
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; m];
    let mut seen = vec![false; m];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let mut kids: Vec<usize> =
            tree.neighbors(u).iter().copied().filter(|&w| !seen[w]).collect();
        kids.sort_by_key(|&w| (std::cmp::Reverse(tree.degree(w)), w));
        for w in kids {
            seen[w] = true;
            parent[w] = u;
            order.push(w);
        }
    }
    // candidates sorted by (degree, label) once per host vertex
    let by_degree = |list: &mut Vec<usize>| list.sort_by_key(|&h| (host.degree(h), h));
    let mut root_candidates: Vec<usize> =
        (0..n).filter(|&h| host.degree(h) >= tree.degree(root)).collect();
    by_degree(&mut root_candidates);
    let mut sorted_adj: Vec<Vec<usize>> = (0..n).map(|h| host.neighbors(h).to_vec()).collect();
    for list in &mut sorted_adj {
        by_degree(list);
    }

    struct Ctx<'a> {
        tree: &'a LabeledTree,
        host: &'a Graph,
        order: &'a [usize],
        parent: &'a [usize],
        sorted_adj: &'a [Vec<usize>],
        image: Vec<usize>,
        used: Vec<bool>,
        remaining: u64,
    }

    fn go(ctx: &mut Ctx, depth: usize) -> Result<bool, EmbedError> {
        if depth == ctx.order.len() {
            return Ok(true);
        }
        let v = ctx.order[depth];
        let par_img = ctx.image[ctx.parent[v]];
        let needed = ctx.tree.degree(v);
        // candidate pool: host neighbors of the parent's image
        for idx in 0..ctx.sorted_adj[par_img].len() {
            let c = ctx.sorted_adj[par_img][idx];
            if ctx.used[c] || ctx.host.degree(c) < needed {
                continue;
            }
            if ctx.remaining == 0 {
                return Err(EmbedError::BudgetExceeded { expanded: 0 });
            }
            ctx.remaining -= 1;
            ctx.image[v] = c;
            ctx.used[c] = true;
            if go(ctx, depth + 1)? {
                return Ok(true);
            }
            ctx.used[c] = false;
        }
        Ok(false)
    }

    let mut ctx = Ctx {
        tree,
        host,
        order: &order,
        parent: &parent,
        sorted_adj: &sorted_adj,
        image: vec![usize::MAX; m],
        used: vec![false; n],
        remaining: budget,
    };
    for &c in &root_candidates {
        if ctx.remaining == 0 {
            return Err(EmbedError::BudgetExceeded { expanded: budget });
        }
        ctx.remaining -= 1;
        ctx.image[root] = c;
        ctx.used[c] = true;
        match go(&mut ctx, 1) {
            Ok(true) => {
                let map = EmbeddingMap { map: ctx.image.clone(), method: EmbedMethod::Backtracking };
                debug_assert!(verify_embedding(tree, host, &map.map));
                return Ok(SearchOutcome::Found(map));
            }
            Ok(false) => {
                ctx.used[c] = false;
            }
            Err(_) => return Err(EmbedError::BudgetExceeded { expanded: budget }),
        }
    }
    Ok(SearchOutcome::Exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::decompose;
    use crate::tree::profile;

    fn tree_of(edges: &[(usize, usize)]) -> (LabeledTree, TreeProfile, Decomposition) {
        let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
        let t = LabeledTree::from_graph(Graph::from_edges(n, edges).unwrap()).unwrap();
        let p = profile(&t);
        let d = decompose(&t, &p);
        (t, p, d)
    }

    fn path(n: usize) -> (LabeledTree, TreeProfile, Decomposition) {
        let t = LabeledTree::from_graph(Graph::path(n)).unwrap();
        let p = profile(&t);
        let d = decompose(&t, &p);
        (t, p, d)
    }

    #[test]
    fn high_degree_join_p7() {
        // host: K̄_2 ∨ (C_5 plus isolated vertices), n = 12, Δ(part2) = 2 = δ
        let (t, p, _) = path(7);
        let part2 = Graph::disjoint_union(&[&Graph::cycle(5), &Graph::empty(5)]);
        let host = JoinHost::general(Graph::empty(2), part2);
        let map = embed_highdeg_join(&t, &p, &host).unwrap();
        assert!(verify_embedding(&t, &host.to_graph(), &map.map));
        assert_eq!(map.method, EmbedMethod::HighDegreeJoin);
    }

    #[test]
    fn high_degree_join_star_no_part1() {
        // K_{1,4} with l = 0: the host is part2 alone with a degree-4 vertex
        let (t, p, _) = tree_of(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(p.l, 0);
        let host = JoinHost::general(Graph::empty(0), Graph::star(5));
        let map = embed_highdeg_join(&t, &p, &host).unwrap();
        assert!(verify_embedding(&t, &host.to_graph(), &map.map));
    }

    #[test]
    fn high_degree_join_rejects_low_degree() {
        let (t, p, _) = path(7);
        let host = JoinHost::general(Graph::empty(2), Graph::empty(10));
        assert!(matches!(
            embed_highdeg_join(&t, &p, &host),
            Err(EmbedError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn nonembeddable_certificate_p7() {
        // K_2 ∨ K̄_{n-2}: part2 empty, δ = 2, no degree-1 vertices in part2
        let (t, p, _) = path(7);
        let host = JoinHost::general(Graph::complete(2), Graph::empty(10));
        let cert = certify_nonembeddable(&t, &p, &host).unwrap();
        assert_eq!(cert.part2_max_degree, 0);
        assert_eq!(cert.degree_delta_minus_1_count, 0);
        assert_eq!(cert.rows.len(), p.l + 1);
        for row in &cert.rows {
            assert!(row.forced_into_part1 >= row.p as i64);
        }
        // the exact search agrees
        let hg = host.to_graph();
        assert_eq!(
            find_embedding_exact(&t, &hg, DEFAULT_BUDGET).unwrap(),
            SearchOutcome::Exhausted
        );
    }

    #[test]
    fn nonembeddable_conditions_not_met() {
        let (t, p, _) = path(7);
        // two degree-1 vertices in part2: no conclusion from the counting
        // argument, only the exact search answers
        let part2 = Graph::disjoint_union(&[&Graph::path(2), &Graph::empty(8)]);
        let host = JoinHost::general(Graph::empty(2), part2);
        assert!(matches!(
            certify_nonembeddable(&t, &p, &host),
            Err(EmbedError::ConditionsNotMet(_))
        ));
        // the oracle settles it: the longest path here alternates through
        // two join vertices plus the single part-2 edge, six vertices only
        let hg = host.to_graph();
        assert_eq!(
            find_embedding_exact(&t, &hg, DEFAULT_BUDGET).unwrap(),
            SearchOutcome::Exhausted
        );
        // Δ(part2) ≥ δ: no conclusion either
        let host = JoinHost::general(Graph::empty(2), Graph::star(9));
        assert!(matches!(
            certify_nonembeddable(&t, &p, &host),
            Err(EmbedError::ConditionsNotMet(_))
        ));
    }

    #[test]
    fn star_host_p7() {
        let (t, p, d) = path(7);
        match crate::hypothesis::find_witness(&t, &p, &d) {
            crate::hypothesis::WitnessSearch::Found(cert) => {
                let map = embed_star_host(&t, &p, &d, &cert).unwrap();
                let host = JoinHost::star_pack(p.l, p.m, p.delta);
                assert!(verify_embedding(&t, &host.to_graph(), &map.map));
            }
            other => panic!("expected witness for P7, got {:?}", other),
        }
    }

    #[test]
    fn star_host_rejects_missing_witness() {
        let (t, p, d) = tree_of(&[(0, 1), (0, 2), (0, 3), (0, 4)]);
        // fabricate an invalid certificate: K_{1,4} has empty J'
        let cert = HypothesisCertificate {
            witness: vec![],
            lhs: 0,
            rhs: 2,
            tree_check: false,
            per_vertex: vec![],
            excess_ok: None,
            neighborhood_ok: None,
        };
        assert!(matches!(
            embed_star_host(&t, &p, &d, &cert),
            Err(EmbedError::InvalidCertificate(_))
        ));
    }

    #[test]
    fn exact_search_identity_and_bipartite() {
        let (t, _, _) = path(7);
        match find_embedding_exact(&t, t.graph(), DEFAULT_BUDGET).unwrap() {
            SearchOutcome::Found(map) => {
                assert!(verify_embedding(&t, t.graph(), &map.map));
            }
            SearchOutcome::Exhausted => panic!("identity embedding must exist"),
        }
        // K_{l+1, m} holds every tree whose smaller side fits
        let host = Graph::complete_bipartite(3, 7);
        match find_embedding_exact(&t, &host, DEFAULT_BUDGET).unwrap() {
            SearchOutcome::Found(map) => assert!(verify_embedding(&t, &host, &map.map)),
            SearchOutcome::Exhausted => panic!("K_{{3,7}} contains P7"),
        }
    }

    #[test]
    fn exact_search_budget() {
        let (t, _, _) = path(7);
        let host = Graph::complete_bipartite(3, 7);
        assert!(matches!(
            find_embedding_exact(&t, &host, 2),
            Err(EmbedError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn verify_rejects_collisions() {
        let (t, _, _) = path(3);
        let host = Graph::path(3);
        assert!(verify_embedding(&t, &host, &[0, 1, 2]));
        assert!(!verify_embedding(&t, &host, &[0, 1, 1]));
        assert!(!verify_embedding(&t, &host, &[0, 2, 1]));
    }
}
