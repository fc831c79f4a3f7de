//! `edgeglue` command-line front end.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use edgeglue::bounds::{
    binom_ratio_bounds, cleaning_threshold, deletion_exponent, es_beta, es_exponent_forest, format_rational,
    parse_rational, tree_leaf_gluing_exponent, PatternStats, Rational,
};
use edgeglue::constructions::{
    almost_regular, deletion_construction, disjoint_blowup, random_sign_split, sample_gnp, SeededSampler,
};
use edgeglue::embedding::{count_embeddings, count_signed_embeddings, is_free, is_free_signed};
use edgeglue::extremal::{
    exact_turan, exact_zarankiewicz_family, forbidden_labels, ratio_report, ExtremalRecord, Kind, Method, RatioRow,
    RecordQuery, RecordStore, Size, STORE_ENV,
};
use edgeglue::gluing::{glue_family, signed_glue, GluingOutput, GluingSpec, RootedPattern};
use edgeglue::graph::{automorphism_count, encode_graph6, parse_graph, parse_signed, signed_automorphism_count, Edge};
use edgeglue::supersat::{
    build_balanced_family, build_signed_balanced_family, find_recruitable, rough_count_check, verify_family,
    BalancedFamily, BuildOptions, FamilyConstraints, FamilyJson,
};
use edgeglue::{Error, Graph, Result, SignedBipartiteGraph};

use output::{Format, Output};

#[derive(Parser, Debug)]
#[command(
    name = "edgeglue",
    version,
    about = "Edge-gluing, balanced families and exact small extremal numbers"
)]
struct Cli {
    /// Record store (JSON lines) for computed extremal numbers.
    #[arg(long, global = true, env = STORE_ENV)]
    store: Option<PathBuf>,
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Refuse hosts with more vertices than this.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Glue two graphs along marked edges (or run a JSON gluing spec).
    Glue(GlueArgs),
    /// Count embeddings and copies of a pattern in a host.
    Count(CountArgs),
    /// Exact Turán number ex(n, forbidden).
    Ex(ExArgs),
    /// Exact Zarankiewicz number z(m, n, forbidden) for signed patterns.
    Zex(ZexArgs),
    /// ex(n, H) against z(n, n, H) for several n.
    Ratio(RatioArgs),
    /// Goodness exponent of a glued pattern.
    Exponent(ExponentArgs),
    /// Density threshold of the cleaning step.
    Threshold(ThresholdArgs),
    /// Random and deterministic host constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// Build a balanced family of embeddings.
    Supersat(SupersatArgs),
    /// Check families, freeness and inequalities.
    #[command(subcommand)]
    Verify(Verify),
    /// Inspect the record store.
    #[command(subcommand)]
    Cache(Cache),
}

#[derive(Args, Debug)]
struct GlueArgs {
    #[arg(long, required_unless_present = "spec")]
    a: Option<String>,
    /// Edge of `a`: an index into its sorted edge list or `u,v`.
    #[arg(long, default_value = "0")]
    ea: String,
    #[arg(long, required_unless_present = "spec")]
    b: Option<String>,
    #[arg(long, default_value = "0")]
    eb: String,
    /// Signed gluing: `a` and `b` are signed graphs, edges are `(+, -)` pairs.
    #[arg(long)]
    signed: bool,
    /// JSON gluing spec file (`-` for standard input).
    #[arg(long, conflicts_with_all = ["a", "b", "signed"])]
    spec: Option<String>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    host: String,
    #[arg(long)]
    signed: bool,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum MethodArg {
    Oracle,
    BranchAndBound,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Oracle => Method::Oracle,
            MethodArg::BranchAndBound => Method::BranchAndBound,
        }
    }
}

#[derive(Args, Debug)]
struct ExArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, required = true)]
    forbid: Vec<String>,
    #[arg(long, value_enum, default_value = "branch-and-bound")]
    method: MethodArg,
}

#[derive(Args, Debug)]
struct ZexArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, required = true)]
    forbid: Vec<String>,
    #[arg(long, value_enum, default_value = "branch-and-bound")]
    method: MethodArg,
}

#[derive(Args, Debug)]
struct RatioArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
}

/// Root forest selection shared by `exponent`, `threshold` and `supersat`.
#[derive(Args, Debug)]
struct RootArgs {
    #[arg(long)]
    pattern: String,
    /// Root the pattern at one edge, `u,v`; without a value the first edge.
    #[arg(long, num_args = 0..=1, default_missing_value = "first")]
    root_edge: Option<String>,
    /// Root vertices of a general forest, e.g. `0,1,2`.
    #[arg(long, value_delimiter = ',', conflicts_with = "root_edge")]
    roots: Vec<usize>,
    /// Root edges of a general forest, e.g. `0-1,1-2`.
    #[arg(long, value_delimiter = ',', requires = "roots")]
    root_edges: Vec<String>,
    /// Distinguished root edge, `u,v`.
    #[arg(long, requires = "roots")]
    distinguished: Option<String>,
}

#[derive(Args, Debug)]
struct ExponentArgs {
    #[command(flatten)]
    root: RootArgs,
    #[arg(long, required_unless_present_any = ["tree", "deletion"])]
    alpha: Option<String>,
    /// Exponent of the tree glued along its leaves.
    #[arg(long, conflicts_with = "deletion")]
    tree: bool,
    /// Lower-bound exponent 2 - (v - 2)/(e - 1) of the deletion construction.
    #[arg(long)]
    deletion: bool,
    /// Also report β for these η, K and number of copies.
    #[arg(long, requires_all = ["k", "copies"])]
    eta: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    copies: Option<usize>,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    #[command(flatten)]
    root: RootArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: String,
    #[arg(long, default_value = "1")]
    gamma: String,
    #[arg(long, default_value = "1")]
    c: String,
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// Binomial random graph G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long)]
        seed: u64,
    },
    /// G(n, p) at the deletion probability with one edge removed per copy.
    Deletion {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        forbid: String,
        #[arg(long)]
        seed: u64,
    },
    /// Uniform equipartition keeping crossing edges.
    SignSplit {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        seed: u64,
    },
    /// Disjoint copies of a signed base graph padded to parts (m, n).
    Blowup {
        #[arg(long)]
        base: String,
        #[arg(long)]
        q1: String,
        #[arg(long)]
        q2: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args, Debug)]
struct SupersatArgs {
    /// Host graph; signed with `--signed`.
    #[arg(long, required_unless_present = "gnp_n")]
    host: Option<String>,
    /// Sample the host as G(n, p) instead.
    #[arg(long, requires_all = ["gnp_p", "seed"], conflicts_with = "host")]
    gnp_n: Option<usize>,
    #[arg(long)]
    gnp_p: Option<String>,
    #[command(flatten)]
    root: RootArgs,
    #[arg(long)]
    signed: bool,
    #[arg(long)]
    per_pair_cap: Option<u64>,
    #[arg(long)]
    per_edge_cap: Option<u64>,
    #[arg(long)]
    target: Option<usize>,
    /// Derive the caps from (A, ε, γ) for signed families.
    #[arg(long, requires_all = ["epsilon", "gamma"], conflicts_with_all = ["per_pair_cap", "per_edge_cap"])]
    derive_a: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    /// Shuffle the host edge order with this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// One member per unlabeled copy.
    #[arg(long)]
    unlabeled: bool,
    /// Scan all embeddings to confirm nothing else can join.
    #[arg(long)]
    check_maximal: bool,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Recompute a serialized family's degrees against caps.
    Family {
        #[arg(long)]
        file: String,
        #[arg(long)]
        per_pair_cap: Option<u64>,
        #[arg(long)]
        per_edge_cap: Option<u64>,
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        check_maximal: bool,
    },
    /// Whether `host` contains no copy of `forbid`.
    Free {
        #[arg(long)]
        host: String,
        #[arg(long)]
        forbid: String,
        #[arg(long)]
        signed: bool,
    },
    /// Copies of `pattern` in `host` against (K/2)^e(H) z.
    CopyBound {
        #[arg(long)]
        host: String,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        k: String,
    },
    /// q (q/2)^(s-1) <= C(n-s, qn-s)/C(n, qn) <= q^s.
    Binom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: String,
        #[arg(long)]
        s: usize,
    },
    /// Δ(G) <= K δ(G).
    AlmostRegular {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        k: String,
    },
}

#[derive(Subcommand, Debug)]
enum Cache {
    /// Print the store path.
    Path,
    /// List stored records.
    List {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Look up one record without computing.
    Get {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long, required = true)]
        forbid: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum KindArg {
    Turan,
    Zarankiewicz,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Turan => Kind::Turan,
            KindArg::Zarankiewicz => Kind::Zarankiewicz,
        }
    }
}

struct Config {
    store: Option<RecordStore>,
    max_vertices: Option<usize>,
}

impl Config {
    fn check(&self, what: &'static str, actual: usize) -> Result<()> {
        match self.max_vertices {
            Some(limit) if actual > limit => Err(Error::SizeExceeded { what, limit, actual }),
            _ => Ok(()),
        }
    }

    fn store(&self) -> Result<&RecordStore> {
        self.store
            .as_ref()
            .ok_or_else(|| Error::PreconditionViolated(format!("no store: pass --store or set {STORE_ENV}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            clap::Error::raw(clap::error::ErrorKind::ValueValidation, "--threads must be positive\n").exit();
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("first pool setup");
    }
    if cli.max_vertices == Some(0) {
        clap::Error::raw(
            clap::error::ErrorKind::ValueValidation,
            "--max-vertices must be positive\n",
        )
        .exit();
    }
    let config = Config {
        store: cli.store.as_ref().map(RecordStore::open),
        max_vertices: cli.max_vertices,
    };
    match run(&cli.command, &config) {
        Ok(out) => {
            let text = out.render(cli.format);
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command, config: &Config) -> Result<Output> {
    match command {
        Command::Glue(a) => glue(a, config),
        Command::Count(a) => count(a, config),
        Command::Ex(a) => ex(a, config),
        Command::Zex(a) => zex(a, config),
        Command::Ratio(a) => ratio(a, config),
        Command::Exponent(a) => exponent(a),
        Command::Threshold(a) => threshold(a),
        Command::Construct(c) => construct(c, config),
        Command::Supersat(a) => supersat(a, config),
        Command::Verify(v) => verify(v, config),
        Command::Cache(c) => cache(c, config),
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        Ok(std::io::read_to_string(std::io::stdin())?)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn parse_pair(text: &str) -> Result<Edge> {
    let bad = || Error::Parse(format!("expected an edge `u,v`, got {text:?}"));
    let (a, b) = text.split_once([',', '-']).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// An edge given as `u,v` or as an index into `edges`.
fn parse_edge(text: &str, edges: &[Edge]) -> Result<Edge> {
    if text.contains([',', '-']) {
        return parse_pair(text);
    }
    let i: usize = text
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected an edge index or `u,v`, got {text:?}")))?;
    edges
        .get(i)
        .copied()
        .ok_or_else(|| Error::Parse(format!("edge index {i} out of range ({} edges)", edges.len())))
}

fn rational_arg(text: &str) -> Result<Rational> {
    parse_rational(text)
}

fn signed_json(g: &SignedBipartiteGraph) -> Value {
    serde_json::from_str(&g.to_json()).expect("graph JSON")
}

fn glue(a: &GlueArgs, config: &Config) -> Result<Output> {
    let result = if let Some(path) = &a.spec {
        GluingSpec::from_json(&read_input(path)?)?.run()?
    } else {
        let (ga, gb) = (a.a.as_deref().unwrap_or_default(), a.b.as_deref().unwrap_or_default());
        if a.signed {
            let (ha, hb) = (parse_signed(ga)?, parse_signed(gb)?);
            let parts = [
                (ha.clone(), parse_edge(&a.ea, &ha.edges())?),
                (hb.clone(), parse_edge(&a.eb, &hb.edges())?),
            ];
            GluingOutput::Signed(signed_glue(&parts)?)
        } else {
            let (ha, hb) = (parse_graph(ga)?, parse_graph(gb)?);
            let parts = [
                (ha.clone(), parse_edge(&a.ea, &ha.edges())?),
                (hb.clone(), parse_edge(&a.eb, &hb.edges())?),
            ];
            GluingOutput::Family(glue_family(&parts)?)
        }
    };
    match result {
        GluingOutput::Family(family) => {
            for g in &family {
                config.check("glued graph", g.vertex_count())?;
            }
            let graphs: Vec<String> = family.iter().map(encode_graph6).collect();
            Ok(Output::graphs(json!({"count": graphs.len(), "graphs": graphs}), graphs))
        }
        GluingOutput::Signed(g) => {
            config.check("glued graph", g.vertex_count())?;
            let line = encode_graph6(g.as_graph());
            Ok(Output::graphs(
                json!({"plus": g.plus_count(), "minus": g.minus_count(), "graph6": line, "graph": signed_json(&g)}),
                vec![line],
            ))
        }
    }
}

fn count(a: &CountArgs, config: &Config) -> Result<Output> {
    let (embeddings, automorphisms) = if a.signed {
        let (h, g) = (parse_signed(&a.pattern)?, parse_signed(&a.host)?);
        config.check("host", g.vertex_count())?;
        (count_signed_embeddings(&h, &g)?, signed_automorphism_count(&h)?)
    } else {
        let (h, g) = (parse_graph(&a.pattern)?, parse_graph(&a.host)?);
        config.check("host", g.vertex_count())?;
        (count_embeddings(&h, &g)?, automorphism_count(&h)?)
    };
    Ok(Output::json(json!({
        "embeddings": embeddings,
        "automorphisms": automorphisms,
        "copies": embeddings / automorphisms,
    })))
}

fn record_json(r: &ExtremalRecord, names: &[String], method: &str) -> Value {
    let mut v = json!({
        "kind": r.kind,
        "forbidden": names,
        "n": r.size.n,
        "value": r.value,
        "witness": r.witness,
        "method": method,
    });
    if let Some(m) = r.size.m {
        v["m"] = json!(m);
    }
    v
}

/// Looks the record up in the store, otherwise computes and stores it.
fn cached(
    config: &Config,
    query: RecordQuery,
    compute: impl FnOnce() -> Result<ExtremalRecord>,
) -> Result<(ExtremalRecord, bool)> {
    if let Some(store) = &config.store {
        if let Some(r) = store.load(&query)?.into_iter().next() {
            return Ok((r, true));
        }
    }
    let record = compute()?;
    if let Some(store) = &config.store {
        store.store(&record)?;
    }
    Ok((record, false))
}

fn extremal_output(record: ExtremalRecord, hit: bool, names: &[String]) -> Output {
    let method = if hit { "cached" } else { record.method.as_str() };
    let witness = record.witness.clone();
    let mut out = Output::json(record_json(&record, names, method));
    out.graphs = vec![witness];
    out
}

fn ex(a: &ExArgs, config: &Config) -> Result<Output> {
    config.check("host", a.n)?;
    let forbidden = a.forbid.iter().map(|s| parse_graph(s)).collect::<Result<Vec<_>>>()?;
    let query = RecordQuery {
        kind: Some(Kind::Turan),
        size: Some(Size { m: None, n: a.n }),
        forbidden: Some(forbidden_labels(&forbidden)?),
    };
    let (record, hit) = cached(config, query, || exact_turan(a.n, &forbidden, a.method.into()))?;
    Ok(extremal_output(record, hit, &a.forbid))
}

fn zex(a: &ZexArgs, config: &Config) -> Result<Output> {
    config.check("host", a.m + a.n)?;
    let forbidden = a.forbid.iter().map(|s| parse_signed(s)).collect::<Result<Vec<_>>>()?;
    let query = RecordQuery {
        kind: Some(Kind::Zarankiewicz),
        size: Some(Size { m: Some(a.m), n: a.n }),
        forbidden: Some(forbidden_labels(&forbidden)?),
    };
    let (record, hit) = cached(config, query, || {
        exact_zarankiewicz_family(a.m, a.n, &forbidden, a.method.into())
    })?;
    Ok(extremal_output(record, hit, &a.forbid))
}

fn ratio(a: &RatioArgs, config: &Config) -> Result<Output> {
    for &n in &a.sizes {
        config.check("host", 2 * n)?;
    }
    let h = parse_graph(&a.pattern)?;
    let signed = parse_signed(&a.pattern)?;
    let rows: Vec<Value> = ratio_report(&h, &signed, &a.sizes)
        .into_iter()
        .map(|row| match row {
            RatioRow::Computed { n, ex, z, ratio } => json!({
                "n": n,
                "ex": ex,
                "z": z,
                "ratio": ratio.as_ref().map(format_rational),
            }),
            RatioRow::Skipped { n, reason } => json!({"n": n, "skipped": reason}),
        })
        .collect();
    Ok(Output::json(json!({"pattern": a.pattern, "rows": rows})))
}

fn rooted(r: &RootArgs) -> Result<RootedPattern> {
    let g = parse_graph(&r.pattern)?;
    if !r.roots.is_empty() {
        let edges = r.root_edges.iter().map(|e| parse_pair(e)).collect::<Result<Vec<_>>>()?;
        let distinguished = r.distinguished.as_deref().map(parse_pair).transpose()?;
        return RootedPattern::new(g, r.roots.clone(), edges, distinguished);
    }
    let e = match r.root_edge.as_deref() {
        None | Some("first") => *g
            .edges()
            .first()
            .ok_or_else(|| Error::InvalidRootedPattern("pattern has no edges".into()))?,
        Some(text) => parse_edge(text, &g.edges())?,
    };
    RootedPattern::edge_rooted(g, e)
}

fn exponent(a: &ExponentArgs) -> Result<Output> {
    if a.deletion {
        let g = parse_graph(&a.root.pattern)?;
        let value = format_rational(&deletion_exponent(&g)?);
        return Ok(Output::json(json!({"deletion_exponent": value})));
    }
    let (report, stats) = if a.tree {
        let t = parse_graph(&a.root.pattern)?;
        let p = edgeglue::gluing::leaf_extension(&t)?;
        (tree_leaf_gluing_exponent(&t)?, PatternStats::of(&p)?)
    } else {
        let p = rooted(&a.root)?;
        let alpha = rational_arg(a.alpha.as_deref().expect("required by clap"))?;
        let stats = PatternStats::of(&p)?;
        (es_exponent_forest(&alpha, &stats)?, stats)
    };
    let mut out = json!({
        "alpha_prime": format_rational(&report.value),
        "branch": report.branch,
        "first": format_rational(&report.first),
        "second": format_rational(&report.second),
    });
    if let (Some(eta), Some(k), Some(copies)) = (&a.eta, &a.k, a.copies) {
        let beta = es_beta(&rational_arg(eta)?, &stats, &rational_arg(k)?, copies)?;
        out["beta"] = json!(format_rational(&beta));
    }
    Ok(Output::json(out))
}

fn threshold(a: &ThresholdArgs) -> Result<Output> {
    let p = rooted(&a.root)?;
    let report = cleaning_threshold(
        a.n,
        &PatternStats::of(&p)?,
        &rational_arg(&a.gamma)?,
        &rational_arg(&a.alpha)?,
        &rational_arg(&a.c)?,
    )?;
    Ok(Output::json(serde_json::to_value(report).expect("report serializes")))
}

fn construct(c: &Construct, config: &Config) -> Result<Output> {
    match c {
        Construct::Gnp { n, p, seed } => {
            config.check("host", *n)?;
            let sampler = SeededSampler::new(*seed);
            let g = sample_gnp(*n, &rational_arg(p)?, &sampler)?;
            let line = encode_graph6(&g);
            Ok(Output::graphs(
                json!({
                    "construction": "gnp",
                    "seed": seed,
                    "algorithm": sampler.algorithm(),
                    "n": n,
                    "p": format_rational(&rational_arg(p)?),
                    "edges": g.edge_count(),
                    "graph6": line,
                }),
                vec![line],
            )
            .with_header())
        }
        Construct::Deletion { n, forbid, seed } => {
            config.check("host", *n)?;
            let f = parse_graph(forbid)?;
            let sampler = SeededSampler::new(*seed);
            let out = deletion_construction(*n, &f, &sampler)?;
            let line = encode_graph6(&out.graph);
            Ok(Output::graphs(
                json!({
                    "construction": "deletion",
                    "seed": seed,
                    "algorithm": sampler.algorithm(),
                    "n": n,
                    "p": out.p,
                    "forbidden": forbid,
                    "sampled_edges": out.sampled_edges,
                    "deleted": out.deleted,
                    "edges": out.graph.edge_count(),
                    "graph6": line,
                }),
                vec![line],
            )
            .with_header())
        }
        Construct::SignSplit { graph, seed } => {
            let g = parse_graph(graph)?;
            config.check("host", g.vertex_count())?;
            let sampler = SeededSampler::new(*seed);
            let split = random_sign_split(&g, &sampler)?;
            let line = encode_graph6(split.graph.as_graph());
            let signs: String = split
                .signs
                .iter()
                .map(|s| if *s == edgeglue::Sign::Plus { '+' } else { '-' })
                .collect();
            Ok(Output::graphs(
                json!({
                    "construction": "sign-split",
                    "seed": seed,
                    "algorithm": sampler.algorithm(),
                    "signs": signs,
                    "plus": split.graph.plus_count(),
                    "minus": split.graph.minus_count(),
                    "edges": split.graph.edge_count(),
                    "graph": signed_json(&split.graph),
                }),
                vec![line],
            )
            .with_header())
        }
        Construct::Blowup { base, q1, q2, m, n } => {
            config.check("host", m + n)?;
            let g0 = parse_signed(base)?;
            let g = disjoint_blowup(&g0, &rational_arg(q1)?, &rational_arg(q2)?, *m, *n)?;
            let line = encode_graph6(g.as_graph());
            Ok(Output::graphs(
                json!({
                    "construction": "blowup",
                    "plus": g.plus_count(),
                    "minus": g.minus_count(),
                    "edges": g.edge_count(),
                    "graph": signed_json(&g),
                }),
                vec![line],
            )
            .with_header())
        }
    }
}

fn supersat(a: &SupersatArgs, config: &Config) -> Result<Output> {
    let mut constraints = FamilyConstraints::with_caps(a.per_pair_cap, a.per_edge_cap);
    if let Some(big_a) = &a.derive_a {
        let (eps, gamma) = (a.epsilon.as_deref().expect("clap"), a.gamma.as_deref().expect("clap"));
        constraints =
            FamilyConstraints::derive_signed(&rational_arg(big_a)?, &rational_arg(eps)?, &rational_arg(gamma)?);
    }
    constraints.target_size = a.target;
    let options = BuildOptions {
        shuffle: a.seed.map(|s| SeededSampler::new(s).split(1)),
        unlabeled: a.unlabeled,
    };
    let family = if a.signed {
        let g = parse_signed(
            a.host
                .as_deref()
                .ok_or_else(|| Error::PreconditionViolated("--signed needs --host".into()))?,
        )?;
        config.check("host", g.vertex_count())?;
        let h = parse_signed(&a.root.pattern)?;
        let f = match a.root.root_edge.as_deref() {
            None | Some("first") => *h
                .edges()
                .first()
                .ok_or_else(|| Error::InvalidRootedPattern("pattern has no edges".into()))?,
            Some(text) => parse_edge(text, &h.edges())?,
        };
        build_signed_balanced_family(&g, &h, f, &constraints, &options)?
    } else {
        let g = match (&a.host, a.gnp_n) {
            (Some(h), _) => parse_graph(h)?,
            (None, Some(n)) => {
                config.check("host", n)?;
                let p = rational_arg(a.gnp_p.as_deref().expect("clap"))?;
                sample_gnp(n, &p, &SeededSampler::new(a.seed.expect("clap")).split(0))?
            }
            (None, None) => unreachable!("clap requires a host"),
        };
        config.check("host", g.vertex_count())?;
        build_balanced_family(&g, &rooted(&a.root)?, &constraints, &options)?
    };
    let report = verify_family(&family, &constraints, None)?;
    let mut out = json!({
        "size": family.members.len(),
        "per_pair_cap": constraints.per_pair_cap,
        "per_edge_cap": constraints.per_edge_cap,
        "violations": report.violation_count(),
        "family": family.to_json(),
    });
    if let Some(seed) = a.seed {
        out["seed"] = json!(seed);
    }
    if a.check_maximal {
        out["maximal"] = json!(find_recruitable(&family, &constraints)?.is_none());
    }
    Ok(Output::json(out))
}

fn verify(v: &Verify, config: &Config) -> Result<Output> {
    match v {
        Verify::Family {
            file,
            per_pair_cap,
            per_edge_cap,
            target,
            check_maximal,
        } => {
            let text = read_input(file)?;
            let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let json = value.get("family").cloned().unwrap_or(value);
            let json: FamilyJson = serde_json::from_value(json).map_err(|e| Error::Parse(e.to_string()))?;
            let family = BalancedFamily::from_json(&json)?;
            config.check("host", family.host.vertex_count())?;
            let c = FamilyConstraints::with_caps(*per_pair_cap, *per_edge_cap);
            let report = verify_family(&family, &c, *target)?;
            let mut out = serde_json::to_value(&report).expect("report serializes");
            out["violations"] = json!(report.violation_count());
            if *check_maximal {
                out["maximal"] = json!(find_recruitable(&family, &c)?.is_none());
            }
            Ok(Output::json(out))
        }
        Verify::Free { host, forbid, signed } => {
            let free = if *signed {
                let g = parse_signed(host)?;
                config.check("host", g.vertex_count())?;
                is_free_signed(&g, &parse_signed(forbid)?)?
            } else {
                let g = parse_graph(host)?;
                config.check("host", g.vertex_count())?;
                is_free(&g, &parse_graph(forbid)?)?
            };
            Ok(Output::json(json!({"free": free})))
        }
        Verify::CopyBound { host, pattern, z, k } => {
            let g = parse_signed(host)?;
            config.check("host", g.vertex_count())?;
            let report = rough_count_check(&g, &parse_signed(pattern)?, *z, &rational_arg(k)?)?;
            Ok(Output::json(serde_json::to_value(report).expect("report serializes")))
        }
        Verify::Binom { n, q, s } => {
            let r = binom_ratio_bounds(*n, &rational_arg(q)?, *s)?;
            Ok(Output::json(json!({
                "lower": format_rational(&r.lower),
                "exact": format_rational(&r.exact),
                "upper": format_rational(&r.upper),
                "holds": r.lower <= r.exact && r.exact <= r.upper,
            })))
        }
        Verify::AlmostRegular { graph, k } => {
            let g: Graph = parse_graph(graph)?;
            Ok(Output::json(json!({
                "almost_regular": almost_regular(&g, &rational_arg(k)?),
                "min_degree": g.min_degree(),
                "max_degree": g.max_degree(),
            })))
        }
    }
}

fn cache(c: &Cache, config: &Config) -> Result<Output> {
    let store = config.store()?;
    match c {
        Cache::Path => Ok(Output::json(json!({"store": store.path().display().to_string()}))),
        Cache::List { kind } => {
            let query = RecordQuery {
                kind: kind.map(Kind::from),
                ..RecordQuery::default()
            };
            let records = store.load(&query)?;
            Ok(Output::json(json!({"records": records})))
        }
        Cache::Get { kind, m, n, forbid } => {
            let kind = Kind::from(*kind);
            let labels = match kind {
                Kind::Turan => forbidden_labels(&forbid.iter().map(|s| parse_graph(s)).collect::<Result<Vec<_>>>()?)?,
                Kind::Zarankiewicz => {
                    forbidden_labels(&forbid.iter().map(|s| parse_signed(s)).collect::<Result<Vec<_>>>()?)?
                }
            };
            let query = RecordQuery {
                kind: Some(kind),
                size: Some(Size { m: *m, n: *n }),
                forbidden: Some(labels),
            };
            match store.load(&query)?.into_iter().next() {
                Some(r) => Ok(extremal_output(r, true, forbid)),
                None => Ok(Output::json(json!({"found": false}))),
            }
        }
    }
}
