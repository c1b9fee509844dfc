//! Spectral-radius machinery: the closed form `f(x, n)` for the largest
//! quotient eigenvalue of `K_l ∨ (x-regular)`, power iteration with Perron
//! vectors, the two-sided bounds on the extremal spectral radius, the join
//! and Perron-entry inequalities, and the constants/threshold calculator.

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::tree::TreeProfile;

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("delta too small: {0}")]
    DeltaTooSmall(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid inputs: {0}")]
    InvalidInputs(String),
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 100_000;

/// Slack allowed when checking the analytic inequalities numerically.
pub const SLACK_TOL: f64 = 1e-8;

/// Largest root of `(y - (l-1))(y - x) - l(n - l)`, which is the spectral
/// radius of `K_l` joined with any `x`-regular graph on `n - l` vertices.
/// At `l = 0` the root degenerates to `x`, the radius of the regular part
/// alone.
pub fn f_value(l: usize, x: f64, n: f64) -> Result<f64, SpectralError> {
    if n <= l as f64 {
        return Err(SpectralError::Domain(format!("n = {} must exceed l = {}", n, l)));
    }
    if x < 0.0 {
        return Err(SpectralError::Domain(format!("degree argument {} is negative", x)));
    }
    let lf = l as f64;
    let b = lf + x - 1.0;
    let disc = b * b + 4.0 * (n * lf + x - lf * x - lf * lf);
    Ok((b + disc.sqrt()) / 2.0)
}

/// Result of power iteration: the spectral radius and the Perron vector
/// scaled so its largest entry is 1.
#[derive(Debug, Clone)]
pub struct SpectralRadius {
    pub lambda: f64,
    pub perron: Vec<f64>,
    pub converged: bool,
    pub sweeps: usize,
}

/// Power iteration on `A + I` per connected component (the shift defeats
/// bipartite oscillation), merged by taking the maximum component value.
/// The returned vector is supported on the winning component. Convergence
/// requires both the eigenvalue change and the eigen-residual to settle,
/// so the vector itself is accurate enough for entrywise certificates.
pub fn spectral_radius(g: &Graph, tol: f64, max_sweeps: usize) -> SpectralRadius {
    let n = g.vertex_count();
    assert!(n > 0, "spectral radius of the empty graph");
    let mut best_lambda = f64::NEG_INFINITY;
    let mut best_vec: Vec<(usize, f64)> = Vec::new();
    let mut all_converged = true;
    let mut total_sweeps = 0;

    for comp in g.components() {
        let k = comp.len();
        if k == 1 {
            if 0.0 > best_lambda {
                best_lambda = 0.0;
                best_vec = vec![(comp[0], 1.0)];
            }
            continue;
        }
        let index: std::collections::HashMap<usize, usize> =
            comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut x = vec![1.0f64; k];
        let mut lambda_prev = f64::INFINITY;
        let mut lambda = 0.0;
        let mut converged = false;
        for _ in 0..max_sweeps {
            total_sweeps += 1;
            let mut y = x.clone(); // the +I shift
            for (i, &v) in comp.iter().enumerate() {
                for &w in g.neighbors(v) {
                    y[i] += x[index[&w]];
                }
            }
            let num: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            let den: f64 = x.iter().map(|a| a * a).sum();
            let shifted = num / den;
            lambda = shifted - 1.0;
            let residual = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (b - shifted * a).abs())
                .fold(0.0f64, f64::max);
            let sup = y.iter().cloned().fold(0.0f64, f64::max);
            for v in &mut y {
                *v /= sup;
            }
            x = y;
            if (lambda - lambda_prev).abs() < tol && residual < 10.0 * tol * shifted {
                converged = true;
                break;
            }
            lambda_prev = lambda;
        }
        all_converged &= converged;
        if lambda > best_lambda {
            best_lambda = lambda;
            best_vec = comp.iter().zip(&x).map(|(&v, &e)| (v, e)).collect();
        }
    }

    let mut perron = vec![0.0; n];
    for (v, e) in best_vec {
        perron[v] = e;
    }
    SpectralRadius { lambda: best_lambda, perron, converged: all_converged, sweeps: total_sweeps }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsRegime {
    Plain,
    Embeddable,
}

/// Two-sided bounds on the maximum spectral radius over hosts avoiding the
/// profiled tree.
#[derive(Debug, Clone, Serialize)]
pub struct SpexBounds {
    pub lower: f64,
    pub upper: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<usize>,
    pub regime: BoundsRegime,
}

/// Plain regime: `[f(δ-2, n), f(δ-1, n)]`. Embeddable regime (the tree
/// embeds in `K̄_l ∨ m S_δ`): `[f(δ-2, n), f(δ-2, n) + 2c/n]` with `c`
/// defaulting to `(m-1)((δ-1)² + 1)`.
pub fn spex_bounds(
    p: &TreeProfile,
    n: usize,
    embeddable: bool,
    c: Option<usize>,
) -> Result<SpexBounds, SpectralError> {
    if p.delta < 2 {
        return Err(SpectralError::DeltaTooSmall(format!(
            "bounds require delta >= 2, tree has delta = {}",
            p.delta
        )));
    }
    if n <= p.l {
        return Err(SpectralError::Domain(format!("n = {} must exceed l = {}", n, p.l)));
    }
    let nf = n as f64;
    let lower = f_value(p.l, (p.delta - 2) as f64, nf)?;
    if embeddable {
        let c = c.unwrap_or((p.m - 1) * ((p.delta - 1).pow(2) + 1));
        Ok(SpexBounds {
            lower,
            upper: lower + 2.0 * c as f64 / nf,
            c: Some(c),
            regime: BoundsRegime::Embeddable,
        })
    } else {
        let upper = f_value(p.l, (p.delta - 1) as f64, nf)?;
        Ok(SpexBounds { lower, upper, c: None, regime: BoundsRegime::Plain })
    }
}

/// Largest eigenvalue of the 2x2 majorant `[[Δ(H1), |H2|], [|H1|, Δ(H2)]]`;
/// an upper bound for the spectral radius of `H1 ∨ H2`, attained exactly
/// when both parts are regular.
pub fn join_upper_bound(h1: &Graph, h2: &Graph) -> f64 {
    let d = h1.max_degree() as f64;
    let k = h2.max_degree() as f64;
    let n1 = h1.vertex_count() as f64;
    let n2 = h2.vertex_count() as f64;
    ((d + k) + ((d - k).powi(2) + 4.0 * n1 * n2).sqrt()) / 2.0
}

#[derive(Debug, Clone, Serialize)]
pub struct PerronReport {
    pub lambda: f64,
    pub part2_degree: usize,
    /// Largest and smallest Perron entries over part-2 vertices.
    pub max_entry: f64,
    pub min_entry: f64,
    /// `M <= l / (λ - d)`
    pub max_entry_bound: f64,
    pub max_entry_ok: bool,
    pub max_entry_slack: f64,
    /// `M - m <= d M / λ`
    pub spread: f64,
    pub spread_bound: f64,
    pub spread_ok: bool,
    pub spread_slack: f64,
}

/// Checks the two Perron-entry inequalities for a join `H1 ∨ H2` whose
/// spectral radius and Perron vector were already computed: the largest
/// part-2 entry is at most `l / (λ - d)`, and the part-2 spread is at most
/// `d M / λ`, with `d = Δ(H2)`.
pub fn perron_bounds_check(h1: &Graph, h2: &Graph, sr: &SpectralRadius) -> PerronReport {
    let l = h1.vertex_count();
    let d = h2.max_degree();
    let entries = &sr.perron[l..];
    let max_entry = entries.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_entry = entries.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_entry_bound = l as f64 / (sr.lambda - d as f64);
    let spread = max_entry - min_entry;
    let spread_bound = d as f64 * max_entry / sr.lambda;
    PerronReport {
        lambda: sr.lambda,
        part2_degree: d,
        max_entry,
        min_entry,
        max_entry_bound,
        max_entry_ok: max_entry <= max_entry_bound + SLACK_TOL,
        max_entry_slack: max_entry_bound - max_entry,
        spread,
        spread_bound,
        spread_ok: spread <= spread_bound + SLACK_TOL,
        spread_slack: spread_bound - spread,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinedBoundReport {
    pub lambda: f64,
    pub bound: f64,
    pub margin: f64,
    pub ok: bool,
}

/// Tolerance for the refined upper bound check.
pub const REFINED_TOL: f64 = 1e-9;

/// Checks `λ(K_l ∨ H2) <= f(d-1, n) + 2c/n` for a part-2 graph with
/// maximum degree at most `d`, of which at most `c` vertices attain `d`.
pub fn refined_upper_check(
    l: usize,
    h2: &Graph,
    d: usize,
    c: usize,
) -> Result<RefinedBoundReport, SpectralError> {
    if d < 1 {
        return Err(SpectralError::PreconditionFailed("degree cap d must be at least 1".into()));
    }
    if h2.max_degree() > d {
        return Err(SpectralError::PreconditionFailed(format!(
            "max degree {} exceeds cap d = {}",
            h2.max_degree(),
            d
        )));
    }
    let at_cap = (0..h2.vertex_count()).filter(|&v| h2.degree(v) == d).count();
    if at_cap > c {
        return Err(SpectralError::PreconditionFailed(format!(
            "{} vertices of degree {} exceed the allowance c = {}",
            at_cap, d, c
        )));
    }
    let n = l + h2.vertex_count();
    let g = Graph::join(&Graph::complete(l), h2);
    let sr = spectral_radius(&g, DEFAULT_TOL, DEFAULT_MAX_SWEEPS);
    let bound = f_value(l, (d - 1) as f64, n as f64)? + 2.0 * c as f64 / n as f64;
    Ok(RefinedBoundReport {
        lambda: sr.lambda,
        bound,
        margin: bound - sr.lambda,
        ok: sr.lambda <= bound + REFINED_TOL,
    })
}

/// Maximum number of degree-`d` vertices in a graph with `Δ <= d` that has
/// no `k` disjoint stars `S_{d+1}`: `(k-1)(d² + 1)`.
pub fn degree_count_bound(k: usize, d: usize) -> usize {
    (k - 1) * (d * d + 1)
}

/// True iff `(A(G) y)_v >= c y_v` entrywise, certifying `λ(G) >= c` for a
/// nonnegative nonzero `y`.
pub fn rayleigh_lower_cert(g: &Graph, y: &[f64], c: f64) -> bool {
    if y.len() != g.vertex_count() || y.iter().all(|&e| e == 0.0) || y.iter().any(|&e| e < 0.0) {
        return false;
    }
    (0..g.vertex_count()).all(|v| {
        let ay: f64 = g.neighbors(v).iter().map(|&w| y[w]).sum();
        ay >= c * y[v]
    })
}

/// Width of the plain sandwich: `f(δ-1, n) - f(δ-2, n)`.
pub fn gap(l: usize, delta: usize, n: usize) -> Result<f64, SpectralError> {
    if delta < 2 {
        return Err(SpectralError::Domain("gap needs delta >= 2".into()));
    }
    let nf = n as f64;
    Ok(f_value(l, (delta - 1) as f64, nf)? - f_value(l, (delta - 2) as f64, nf)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub valid: bool,
    pub eta_ok: bool,
    pub epsilon_ok: bool,
    pub alpha_ok: bool,
    pub n_terms: [f64; 5],
    pub log10_terms: [f64; 5],
    pub n: f64,
    pub log10_n: f64,
    /// Some term exceeded double precision; `n` is reported in log form.
    pub overflow: bool,
}

/// Validates the three constant chains and evaluates the five threshold
/// terms whose maximum bounds the order beyond which the structural
/// results apply. The binomial term is computed in log space and flagged
/// when it overflows doubles. The chains are checked non-strictly: the
/// explicit settings in use sit exactly on the `α = ε²/(10m)` boundary.
pub fn constants_and_threshold(
    m: usize,
    l: usize,
    eta: f64,
    epsilon: f64,
    alpha: f64,
) -> Result<ConstantsReport, SpectralError> {
    if l < 1 || m < 2 * l + 2 {
        return Err(SpectralError::InvalidInputs(format!(
            "need l >= 1 and m >= 2l + 2, got m = {}, l = {}",
            m, l
        )));
    }
    if eta <= 0.0 || epsilon <= 0.0 || alpha <= 0.0 {
        return Err(SpectralError::InvalidInputs("constants must be positive".into()));
    }
    let (mf, lf) = (m as f64, l as f64);
    let le = |a: f64, b: f64| a <= b * (1.0 + 1e-9);

    let eta_cap2 = (0.2 - 1.0 / (16.0 * lf * mf) + 1.0 / (20.0 * lf * lf * mf)) / (mf - lf - 1.0);
    let eta_ok = le(eta, 1.0 / (2.0 * lf)) && le(eta, eta_cap2);
    let epsilon_ok = le(epsilon, 1.0 / (16.0 * lf * lf * mf))
        && le(epsilon, eta / 2.0)
        && le(epsilon, eta / (32.0 * lf * lf * mf + 2.0));
    let alpha_ok = le(alpha, eta) && le(alpha, epsilon * epsilon / (10.0 * mf));

    let t1 = 200.0 * mf.powi(6) / alpha.powi(4);
    let t2 = 2500.0 * mf.powi(3) * lf * lf / alpha.powi(3);
    let t3 = lf * lf / (epsilon * epsilon);
    let t5 = 200.0 * mf * mf * lf / (alpha * epsilon);
    // t4 = 50 m³ l / (ε α) · C(50 m² l / α, l), via logs
    let x = 50.0 * mf * mf * lf / alpha;
    let ln_binom: f64 =
        (0..l).map(|i| (x - i as f64).ln()).sum::<f64>() - ln_factorial(l);
    let ln10 = std::f64::consts::LN_10;
    let log10_t4 = ((50.0 * mf.powi(3) * lf).ln() - (epsilon * alpha).ln() + ln_binom) / ln10;
    let t4 = if log10_t4 < 308.0 { 10f64.powf(log10_t4) } else { f64::INFINITY };

    let n_terms = [t1, t2, t3, t4, t5];
    let log10_terms = [t1.log10(), t2.log10(), t3.log10(), log10_t4, t5.log10()];
    let overflow = n_terms.iter().any(|t| !t.is_finite());
    let log10_n = log10_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let n = n_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ConstantsReport {
        valid: eta_ok && epsilon_ok && alpha_ok,
        eta_ok,
        epsilon_ok,
        alpha_ok,
        n_terms,
        log10_terms,
        n,
        log10_n,
        overflow,
    })
}

/// The explicit setting `η = 1/(6m)`, `ε = 1/(200 m⁴)`, `α = 1/(400000 m⁹)`.
pub fn explicit_constants(m: usize) -> (f64, f64, f64) {
    let mf = m as f64;
    (1.0 / (6.0 * mf), 1.0 / (200.0 * mf.powi(4)), 1.0 / (400000.0 * mf.powi(9)))
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Circulant on `p` vertices with the given offsets (each in `1..=p/2`).
pub fn circulant(p: usize, offsets: &[usize]) -> Graph {
    let mut g = Graph::empty(p);
    for &s in offsets {
        assert!(s >= 1 && 2 * s <= p, "offset {} out of range for p = {}", s, p);
        for i in 0..p {
            let j = (i + s) % p;
            if !g.has_edge(i, j) {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

/// Exactly `d`-regular circulant on `p` vertices, when parity permits:
/// offsets `±1..±(d/2)`, plus the antipodal offset for odd `d` and even `p`.
pub fn regular_circulant(p: usize, d: usize) -> Option<Graph> {
    if d >= p {
        return None;
    }
    if d.is_multiple_of(2) {
        let offsets: Vec<usize> = (1..=d / 2).collect();
        Some(circulant(p, &offsets))
    } else if p.is_multiple_of(2) {
        let mut offsets: Vec<usize> = (1..=(d - 1) / 2).collect();
        offsets.push(p / 2);
        Some(circulant(p, &offsets))
    } else {
        None
    }
}

/// Almost-regular graph with one vertex of degree `d + 1` and all others of
/// degree `d`, for the parity case (`d` and `p` both odd) where an exact
/// `d`-regular graph does not exist: a `(d+1)`-regular circulant minus a
/// near-perfect matching.
pub fn almost_regular_above(p: usize, d: usize) -> Graph {
    assert!(d % 2 == 1 && p % 2 == 1, "almost-regular fix-up applies to odd d, odd p");
    assert!(d + 1 < p);
    let offsets: Vec<usize> = (1..=d.div_ceil(2)).collect();
    let mut g = circulant(p, &offsets);
    let mut i = 0;
    while i + 1 < p {
        g.remove_edge(i, i + 1);
        i += 2;
    }
    g
}

/// `d`-regular when parity allows, otherwise the almost-regular variant
/// with a single vertex of degree `d + 1`.
pub fn regular_or_almost(p: usize, d: usize) -> Graph {
    regular_circulant(p, d).unwrap_or_else(|| almost_regular_above(p, d))
}
