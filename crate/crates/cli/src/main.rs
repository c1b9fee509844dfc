//! `spex-tree`: analyze trees by their bipartition parameters, compute the
//! core-set decomposition and hypothesis certificates, embed into join
//! hosts, generate family members, evaluate spectral bounds, run the
//! exhaustive oracles, and drive batch sweeps.
//!
//! Exit codes: 0 success (JSON or edge-list report on stdout), 1 domain
//! error (JSON error object on stdout), 2 usage error.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use spex_tree_core::construct::{
    canonical_member, combine, embeddable_member, lobster_from_caterpillar, random_member,
    CaterpillarSpec,
};
use spex_tree_core::decompose::{decompose, Decomposition};
use spex_tree_core::embed::{
    embed_highdeg_join, embed_star_host, find_embedding_exact, verify_embedding, EmbeddingMap,
    JoinHost, SearchOutcome, DEFAULT_BUDGET,
};
use spex_tree_core::graph::Graph;
use spex_tree_core::hypothesis::{find_witness, refine, WitnessSearch};
use spex_tree_core::lab::{brute_force_spex, certify_t_free, enumerate_trees, TFreeOutcome};
use spex_tree_core::spectral::{f_value, regular_circulant, spectral_radius, spex_bounds,
    BoundsRegime, DEFAULT_MAX_SWEEPS, DEFAULT_TOL};
use spex_tree_core::tree::{profile, LabeledTree, TreeProfile};

#[derive(Parser)]
#[command(name = "spex-tree", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TreeInput {
    /// Edge-list file for the tree
    #[arg(long, value_name = "FILE")]
    tree: PathBuf,
    /// Also write the report to this file
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Profile a tree: order, partite sets, minimum small-side degree,
    /// excess degrees
    Analyze(TreeInput),
    /// Core-set chain J, J1, J2, J' and the distance-2 classes
    Decompose(TreeInput),
    /// Search for a hypothesis witness and refine it
    Hypothesis(TreeInput),
    /// Embed a tree into a host
    Embed {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        /// `star`, `join PART1 PART2`, or a plain edge-list file
        #[arg(long, num_args = 1..=3, value_name = "SPEC")]
        host: Vec<String>,
        /// Node budget for the exact search
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Generate a family member (edge-list output)
    Construct(ConstructArgs),
    /// Two-sided spectral bounds for the profiled tree at order n
    Bounds {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long)]
        n: usize,
        /// Use the refined upper bound for star-host-embeddable trees
        #[arg(long)]
        embeddable: bool,
        /// Override the degree-count allowance
        #[arg(long)]
        c: Option<usize>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Exhaustive oracles
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Batch campaigns from a key = value config file
    Sweep {
        #[arg(long, value_name = "FILE")]
        config: PathBuf,
        /// Overrides the config's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the config's comparison tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_name = "KIND")]
    family: String,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    /// Leaf counts per spine vertex for lobsters, comma-separated
    #[arg(long, value_name = "LIST")]
    spine: Option<String>,
    /// Pendant edges per small-side leaf for lobsters
    #[arg(long)]
    pendants: Option<usize>,
    /// Left tree for combine
    #[arg(long, value_name = "FILE")]
    tree: Option<PathBuf>,
    /// Right tree for combine
    #[arg(long, value_name = "FILE")]
    tree2: Option<PathBuf>,
    /// Seed for the randomized generator
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive extremal spectral radius over all n-vertex graphs
    Spex {
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Free trees on m vertices up to isomorphism
    Trees {
        #[arg(long)]
        m: usize,
        /// Include edge lists, not just the count
        #[arg(long)]
        list: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Complete-search certificate that a graph avoids a tree
    Tfree {
        #[arg(long, value_name = "FILE")]
        graph: PathBuf,
        #[arg(long, value_name = "FILE")]
        tree: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

struct AppError {
    code: &'static str,
    message: String,
}

impl AppError {
    fn new(code: &'static str, message: impl Into<String>) -> Self {
        AppError { code, message: message.into() }
    }
}

macro_rules! impl_from_error {
    ($ty:ty, $code:expr) => {
        impl From<$ty> for AppError {
            fn from(e: $ty) -> Self {
                AppError::new($code, e.to_string())
            }
        }
    };
}

impl From<spex_tree_core::tree::TreeError> for AppError {
    fn from(e: spex_tree_core::tree::TreeError) -> Self {
        use spex_tree_core::tree::TreeError::*;
        let code = match e {
            Parse(_) => "ParseError",
            BadLabel(_) => "BadLabel",
            NotATree(_) => "NotATree",
        };
        AppError::new(code, e.to_string())
    }
}

impl From<spex_tree_core::graph::GraphError> for AppError {
    fn from(e: spex_tree_core::graph::GraphError) -> Self {
        AppError::new("GraphError", e.to_string())
    }
}

impl From<spex_tree_core::embed::EmbedError> for AppError {
    fn from(e: spex_tree_core::embed::EmbedError) -> Self {
        use spex_tree_core::embed::EmbedError::*;
        let code = match e {
            PreconditionFailed(_) => "PreconditionFailed",
            ConditionsNotMet(_) => "ConditionsNotMet",
            InvalidCertificate(_) => "InvalidCertificate",
            InternalVerificationFailed(_) => "InternalVerificationFailed",
            BudgetExceeded { .. } => "BudgetExceeded",
        };
        AppError::new(code, e.to_string())
    }
}

impl From<spex_tree_core::construct::ConstructError> for AppError {
    fn from(e: spex_tree_core::construct::ConstructError) -> Self {
        use spex_tree_core::construct::ConstructError::*;
        let code = match e {
            InfeasibleFamily(_) => "InfeasibleFamily",
            SpecInvalid(_) => "SpecInvalid",
            HypothesisMissing => "HypothesisMissing",
            DeltaMismatch { .. } => "DeltaMismatch",
            DeltaIsOne => "DeltaIsOne",
            UnsupportedParameters(_) => "UnsupportedParameters",
            Internal(_) => "Internal",
        };
        AppError::new(code, e.to_string())
    }
}

impl From<spex_tree_core::spectral::SpectralError> for AppError {
    fn from(e: spex_tree_core::spectral::SpectralError) -> Self {
        use spex_tree_core::spectral::SpectralError::*;
        let code = match e {
            Domain(_) => "DomainError",
            DeltaTooSmall(_) => "DeltaTooSmall",
            PreconditionFailed(_) => "PreconditionFailed",
            InvalidInputs(_) => "InvalidInputs",
        };
        AppError::new(code, e.to_string())
    }
}

impl From<spex_tree_core::lab::LabError> for AppError {
    fn from(e: spex_tree_core::lab::LabError) -> Self {
        use spex_tree_core::lab::LabError::*;
        let code = match e {
            OutOfRange(_) => "OutOfRange",
            TooLarge(_) => "TooLarge",
            BudgetExceeded => "BudgetExceeded",
            UnsupportedDelta(_) => "UnsupportedDelta",
            Infeasible(_) => "Infeasible",
        };
        AppError::new(code, e.to_string())
    }
}

impl_from_error!(spex_tree_core::hypothesis::HypothesisError, "HypothesisError");
impl_from_error!(spex_tree_core::decompose::DecomposeError, "DecomposeError");

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::new("IoError", e.to_string())
    }
}

/// Rounds every number in the report to 12 significant digits, so repeated
/// invocations are byte-identical.
fn round_numbers(value: &mut Value) {
    match value {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.as_i64().is_none() && n.as_u64().is_none() {
                    if let Some(rounded) = serde_json::Number::from_f64(sig12(f)) {
                        *value = Value::Number(rounded);
                    }
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 12 - 1 - x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}

fn load_tree(path: &PathBuf) -> Result<(LabeledTree, TreeProfile), AppError> {
    let text = fs::read_to_string(path)?;
    let t = LabeledTree::parse(&text)?;
    let p = profile(&t);
    Ok((t, p))
}

fn load_graph(path: &PathBuf) -> Result<Graph, AppError> {
    let text = fs::read_to_string(path)?;
    Ok(Graph::parse_edge_list(&text)?)
}

fn profile_report(p: &TreeProfile) -> Value {
    let excess: BTreeMap<String, usize> =
        p.excess.iter().map(|(v, t)| (v.to_string(), *t)).collect();
    json!({
        "m": p.m,
        "l": p.l,
        "delta": p.delta,
        "t": p.t,
        "a": p.a,
        "b": p.b,
        "excess": excess,
    })
}

fn embedding_report(map: &EmbeddingMap, verified: bool) -> Value {
    let assignments: BTreeMap<String, usize> =
        map.map.iter().enumerate().map(|(v, h)| (v.to_string(), *h)).collect();
    json!({
        "method": map.method.as_str(),
        "map": assignments,
        "verified": verified,
    })
}

fn hypothesis_report(
    t: &LabeledTree,
    p: &TreeProfile,
    d: &Decomposition,
) -> Result<Value, AppError> {
    match find_witness(t, p, d) {
        WitnessSearch::Found(cert) => {
            let refined = if cert.witness.len() > 1 {
                let set = cert.witness.iter().copied().collect();
                refine(t, p, d, &set)?
            } else {
                cert.witness.clone()
            };
            let per_vertex: Vec<Value> = cert
                .per_vertex
                .iter()
                .map(|c| json!({"v": c.v, "a": c.a, "t": c.t}))
                .collect();
            Ok(json!({
                "found": true,
                "witness": cert.witness,
                "lhs": cert.lhs,
                "rhs": cert.rhs,
                "tree_check": cert.tree_check,
                "per_vertex": per_vertex,
                "refined": refined,
                "valid": cert.is_valid(),
            }))
        }
        WitnessSearch::NoWitness => Ok(json!({"found": false, "witness": []})),
        WitnessSearch::CapExceeded => Ok(json!({
            "found": false,
            "witness": [],
            "search_cap_exceeded": true,
        })),
    }
}

fn run_embed(
    tree: &PathBuf,
    host_spec: &[String],
    budget: u64,
) -> Result<Value, AppError> {
    let (t, p) = load_tree(tree)?;
    match host_spec {
        [kind] if kind == "star" => {
            let d = decompose(&t, &p);
            let cert = match find_witness(&t, &p, &d) {
                WitnessSearch::Found(c) => c,
                WitnessSearch::NoWitness => {
                    return Err(AppError::new(
                        "InvalidCertificate",
                        "no hypothesis witness exists for this tree",
                    ))
                }
                WitnessSearch::CapExceeded => {
                    return Err(AppError::new("SearchCapExceeded", "witness search cap exceeded"))
                }
            };
            let map = embed_star_host(&t, &p, &d, &cert)?;
            let host = JoinHost::star_pack(p.l, p.m, p.delta).to_graph();
            let ok = verify_embedding(&t, &host, &map.map);
            Ok(embedding_report(&map, ok))
        }
        [kind, part1, part2] if kind == "join" => {
            let host = JoinHost::general(
                load_graph(&PathBuf::from(part1))?,
                load_graph(&PathBuf::from(part2))?,
            );
            let map = embed_highdeg_join(&t, &p, &host)?;
            let ok = verify_embedding(&t, &host.to_graph(), &map.map);
            Ok(embedding_report(&map, ok))
        }
        [file] => {
            let host = load_graph(&PathBuf::from(file))?;
            match find_embedding_exact(&t, &host, budget)? {
                SearchOutcome::Found(map) => {
                    let ok = verify_embedding(&t, &host, &map.map);
                    Ok(embedding_report(&map, ok))
                }
                SearchOutcome::Exhausted => Ok(json!({
                    "method": "backtracking",
                    "exhausted": true,
                })),
            }
        }
        _ => Err(AppError::new(
            "UsageError",
            "--host takes `star`, `join PART1 PART2`, or one edge-list file",
        )),
    }
}

fn need<T: Copy>(opt: Option<T>, what: &str) -> Result<T, AppError> {
    opt.ok_or_else(|| AppError::new("MissingArgument", format!("--{} is required here", what)))
}

fn run_construct(args: &ConstructArgs) -> Result<String, AppError> {
    let t = match args.family.as_str() {
        "canonical" => {
            canonical_member(need(args.m, "m")?, need(args.l, "l")?, need(args.delta, "delta")?)?
        }
        "embeddable" => {
            embeddable_member(need(args.m, "m")?, need(args.l, "l")?, need(args.delta, "delta")?)?
        }
        "random" => random_member(
            need(args.m, "m")?,
            need(args.l, "l")?,
            need(args.delta, "delta")?,
            args.seed.unwrap_or(0),
        )?,
        "lobster" => {
            let spine = args.spine.as_deref().ok_or_else(|| {
                AppError::new("MissingArgument", "--spine is required for lobsters")
            })?;
            let leaves: Result<Vec<usize>, _> =
                spine.split(',').map(|s| s.trim().parse::<usize>()).collect();
            let leaves = leaves
                .map_err(|_| AppError::new("SpecInvalid", "--spine must be comma-separated counts"))?;
            let spec = CaterpillarSpec::new(leaves)?;
            lobster_from_caterpillar(&spec, need(args.pendants, "pendants")?)?
        }
        "combine" => {
            let t1 = args
                .tree
                .as_ref()
                .ok_or_else(|| AppError::new("MissingArgument", "--tree required"))?;
            let t2 = args
                .tree2
                .as_ref()
                .ok_or_else(|| AppError::new("MissingArgument", "--tree2 required"))?;
            combine(&load_tree(t1)?.0, &load_tree(t2)?.0)?.0
        }
        other => {
            return Err(AppError::new(
                "UsageError",
                format!(
                    "unknown family {:?}; expected canonical, lobster, combine, embeddable, random",
                    other
                ),
            ))
        }
    };
    Ok(t.to_edge_list())
}

fn run_bounds(tree: &PathBuf, n: usize, embeddable: bool, c: Option<usize>) -> Result<Value, AppError> {
    let (_, p) = load_tree(tree)?;
    let b = spex_bounds(&p, n, embeddable, c)?;
    let regime = match b.regime {
        BoundsRegime::Plain => "plain",
        BoundsRegime::Embeddable => "embeddable",
    };
    let x_upper: Value = match b.regime {
        BoundsRegime::Plain => json!(p.delta - 1),
        BoundsRegime::Embeddable => Value::Null,
    };
    Ok(json!({
        "lower": b.lower,
        "upper": b.upper,
        "regime": regime,
        "c": b.c,
        "f_params": {"l": p.l, "x_lower": p.delta - 2, "x_upper": x_upper, "n": n},
    }))
}

fn run_oracle(cmd: &OracleCommand) -> Result<(Value, Option<PathBuf>), AppError> {
    match cmd {
        OracleCommand::Spex { tree, n, out } => {
            let (t, _) = load_tree(tree)?;
            let report = brute_force_spex(*n, &t)?;
            Ok((serde_json::to_value(&report).expect("report serializes"), out.clone()))
        }
        OracleCommand::Trees { m, list, out } => {
            let trees = enumerate_trees(*m)?;
            let mut report = json!({"m": m, "count": trees.len()});
            if *list {
                let lists: Vec<Vec<(usize, usize)>> =
                    trees.iter().map(|t| t.graph().edges()).collect();
                report["trees"] = serde_json::to_value(lists).unwrap();
            }
            Ok((report, out.clone()))
        }
        OracleCommand::Tfree { graph, tree, budget, out } => {
            let g = load_graph(graph)?;
            let (t, _) = load_tree(tree)?;
            let report = match certify_t_free(&g, &t, *budget)? {
                TFreeOutcome::Free => json!({"free": true, "witness": Value::Null}),
                TFreeOutcome::Contains(map) => {
                    let ok = verify_embedding(&t, &g, &map.map);
                    json!({"free": false, "witness": embedding_report(&map, ok)})
                }
            };
            Ok((report, out.clone()))
        }
    }
}

fn parse_config(text: &str) -> Result<BTreeMap<String, String>, AppError> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(AppError::new(
                "ConfigError",
                format!("line {}: expected `key = value`", lineno + 1),
            ));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn config_usizes(cfg: &BTreeMap<String, String>, key: &str) -> Result<Vec<usize>, AppError> {
    match cfg.get(key) {
        None => Ok(Vec::new()),
        Some(raw) if raw.is_empty() => Ok(Vec::new()),
        Some(raw) => raw
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| AppError::new("ConfigError", format!("bad value in {}", key)))
            })
            .collect(),
    }
}

fn run_sweep(config: &PathBuf, seed: Option<u64>, tol: Option<f64>) -> Result<Value, AppError> {
    let cfg = parse_config(&fs::read_to_string(config)?)?;
    let mode = cfg
        .get("mode")
        .ok_or_else(|| AppError::new("ConfigError", "config needs a `mode` line"))?;
    let seed: Option<u64> = match seed {
        Some(s) => Some(s),
        None => cfg
            .get("seed")
            .map(|s| s.parse().map_err(|_| AppError::new("ConfigError", "bad seed")))
            .transpose()?,
    };
    let tol: f64 = match tol {
        Some(t) => t,
        None => cfg
            .get("tol")
            .map(|s| s.parse().map_err(|_| AppError::new("ConfigError", "bad tol")))
            .transpose()?
            .unwrap_or(1e-8),
    };
    match mode.as_str() {
        "embedding" => {
            let m_max: usize = cfg
                .get("m_max")
                .map(|s| s.parse().map_err(|_| AppError::new("ConfigError", "bad m_max")))
                .transpose()?
                .unwrap_or(12);
            let mut trees: Vec<LabeledTree> = Vec::new();
            for m in 1..=m_max {
                trees.extend(enumerate_trees(m)?);
            }
            let results: Vec<(bool, bool)> = trees
                .par_iter()
                .map(|t| {
                    let p = profile(t);
                    if p.t >= p.l {
                        return (false, false);
                    }
                    let d = decompose(t, &p);
                    let ok = match find_witness(t, &p, &d) {
                        WitnessSearch::Found(cert) => match embed_star_host(t, &p, &d, &cert) {
                            Ok(map) => {
                                let host = JoinHost::star_pack(p.l, p.m, p.delta).to_graph();
                                verify_embedding(t, &host, &map.map)
                            }
                            Err(_) => false,
                        },
                        _ => false,
                    };
                    (true, ok)
                })
                .collect();
            let t_lt_l = results.iter().filter(|(small, _)| *small).count();
            let embedded = results.iter().filter(|(_, ok)| *ok).count();
            let mut report = json!({
                "mode": "embedding",
                "trees": trees.len(),
                "t_lt_l": t_lt_l,
                "embedded": embedded,
                "failures": t_lt_l - embedded,
            });
            if let Some(s) = seed {
                report["seed"] = json!(s);
            }
            Ok(report)
        }
        "f_grid" => {
            let ls = config_usizes(&cfg, "l_values")?;
            let ds = config_usizes(&cfg, "d_values")?;
            let ns = config_usizes(&cfg, "n_values")?;
            let mut cells = 0usize;
            let mut skipped = 0usize;
            let mut max_err: Option<f64> = None;
            for &l in &ls {
                for &d in &ds {
                    for &n in &ns {
                        if n <= l + d {
                            skipped += 1;
                            continue;
                        }
                        match regular_circulant(n - l, d) {
                            Some(h2) => {
                                let g = Graph::join(&Graph::complete(l), &h2);
                                let lam =
                                    spectral_radius(&g, DEFAULT_TOL, DEFAULT_MAX_SWEEPS).lambda;
                                let f = f_value(l, d as f64, n as f64)?;
                                let err = (lam - f).abs();
                                max_err = Some(max_err.map_or(err, |m: f64| m.max(err)));
                                cells += 1;
                            }
                            None => skipped += 1,
                        }
                    }
                }
            }
            Ok(json!({
                "mode": "f_grid",
                "cells": cells,
                "skipped": skipped,
                "max_abs_err": max_err,
                "tol": tol,
                "within_tol": max_err.map(|e| e < tol),
            }))
        }
        other => Err(AppError::new("ConfigError", format!("unknown mode {:?}", other))),
    }
}

fn emit(report: String, out: Option<&PathBuf>) -> Result<(), AppError> {
    if let Some(path) = out {
        fs::write(path, &report)?;
    }
    println!("{}", report);
    Ok(())
}

fn run(cli: Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Analyze(input) => {
            let (_, p) = load_tree(&input.tree)?;
            let mut report = profile_report(&p);
            round_numbers(&mut report);
            emit(report.to_string(), input.out.as_ref())
        }
        Command::Decompose(input) => {
            let (t, p) = load_tree(&input.tree)?;
            let d = decompose(&t, &p);
            let report = serde_json::to_value(d.report()).expect("report serializes");
            emit(report.to_string(), input.out.as_ref())
        }
        Command::Hypothesis(input) => {
            let (t, p) = load_tree(&input.tree)?;
            let d = decompose(&t, &p);
            let report = hypothesis_report(&t, &p, &d)?;
            emit(report.to_string(), input.out.as_ref())
        }
        Command::Embed { tree, host, budget, out } => {
            let report = run_embed(tree, host, *budget)?;
            emit(report.to_string(), out.as_ref())
        }
        Command::Construct(args) => {
            let text = run_construct(args)?;
            if let Some(path) = &args.out {
                fs::write(path, &text)?;
            }
            print!("{}", text);
            Ok(())
        }
        Command::Bounds { tree, n, embeddable, c, out } => {
            let mut report = run_bounds(tree, *n, *embeddable, *c)?;
            round_numbers(&mut report);
            emit(report.to_string(), out.as_ref())
        }
        Command::Oracle(cmd) => {
            let (mut report, out) = run_oracle(cmd)?;
            round_numbers(&mut report);
            emit(report.to_string(), out.as_ref())
        }
        Command::Sweep { config, seed, tol, out } => {
            let mut report = run_sweep(config, *seed, *tol)?;
            round_numbers(&mut report);
            emit(report.to_string(), out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut obj = Map::new();
            obj.insert("error".into(), Value::String(e.code.to_string()));
            obj.insert("message".into(), Value::String(e.message));
            println!("{}", Value::Object(obj));
            ExitCode::from(1)
        }
    }
}
