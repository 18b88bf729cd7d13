//! `hwm`: exact and simulated moments of heavy Wigner matrices.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use heavy_moments::config::{load_model, parse_inline};
use heavy_moments::engine::{phi_k, phi_k_bruteforce_with, DiagonalMoments, YModel, DEFAULT_PARTITION_CAP};
use heavy_moments::graph::{family_components, fat_tree_profile, is_free_product, limit_injective_trace, two_edge_structure, StarTestGraph};
use heavy_moments::lab::{ensemble_parameter, simulate, EnsembleSpec, SimulationConfig, WeightLaw};
use heavy_moments::rational::{format_rational, q, parse_rational, to_f64, Q};
use heavy_moments::sd::{series_g, series_vs_sd_report};
use heavy_moments::verify::{evaluate, run_verify, Engine, VerifyConfig};
use heavy_moments::{Error, Execution, HeavyParams, InterleavedWord, Letter, MomentPolynomial, ParamSeq, Word};

/// Slack added to `4 · stderr` when comparing a simulation with its limit.
const FINITE_SIZE_C: f64 = 20.0;

#[derive(Parser)]
#[command(name = "hwm", version, about = "Exact and simulated moments of heavy Wigner matrices")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[command(next_help_heading = "Shared options")]
struct Shared {
    /// Parameter file (JSON), or inline `trivial:a`, `const:a`, `list:a1,a2,...`
    #[arg(long, global = true, value_name = "FILE|INLINE", conflicts_with = "symbolic")]
    param: Option<String>,
    /// y-model file (JSON with a "y" entry)
    #[arg(long, global = true, value_name = "FILE")]
    y: Option<String>,
    /// Keep every parameter symbolic (default when --param is absent)
    #[arg(long, global = true)]
    symbolic: bool,
    /// Output format [default: pretty for moments and sd, json otherwise]
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Base seed of the random streams
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Parameter truncation k_max; for `series`, the largest K
    #[arg(long, global = true)]
    kmax: Option<u32>,
    /// Series order (largest m)
    #[arg(long, global = true, default_value_t = 6)]
    order: usize,
    /// Cap on set partitions visited by the partition oracle
    #[arg(long, global = true, default_value_t = DEFAULT_PARTITION_CAP)]
    partition_cap: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Tree,
    Partition,
    Sd,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnsembleArg {
    ErdosRenyi,
    Network,
    TruncatedLevy,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WeightArg {
    Rademacher,
    Gaussian,
    Uniform,
}

#[derive(Subcommand)]
enum Command {
    /// Limiting moment Φ of a word, or Φ^(K) of several words (Hadamard product)
    Moments {
        /// Word such as "x1^2 x2^2"; repeat for a Hadamard product
        #[arg(long, required = true)]
        word: Vec<String>,
        /// Engine to run; `all` runs every engine and requires agreement
        #[arg(long, value_enum, default_value_t = EngineArg::Tree)]
        engine: EngineArg,
    },
    /// Coefficients of the generating series G(K) of one matrix
    Series {
        /// Index j of the matrix x_j
        #[arg(long, default_value_t = 1)]
        matrix: u32,
        /// Compare every coefficient with the recursion solver
        #[arg(long)]
        check: bool,
    },
    /// Φ^(K) by the recursion solver
    Sd {
        /// Word; repeat for a Hadamard product
        #[arg(long, required = true)]
        word: Vec<String>,
    },
    /// Monte Carlo estimate of a (Hadamard) moment
    Simulate {
        /// Random matrix ensemble
        #[arg(long, value_enum)]
        ensemble: EnsembleArg,
        /// Mean degree (erdos-renyi, network)
        #[arg(long)]
        alpha: Option<f64>,
        /// Stability index in (0, 2) (truncated-levy)
        #[arg(long)]
        alpha_stable: Option<f64>,
        /// Truncation level B (truncated-levy)
        #[arg(long)]
        cutoff: Option<f64>,
        /// Edge weight law (network)
        #[arg(long, value_enum, default_value_t = WeightArg::Rademacher)]
        weights: WeightArg,
        /// Matrix size N
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Replicates
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// Word; repeat for a Hadamard product
        #[arg(long, required = true)]
        word: Vec<String>,
        /// Diagonal of y1, comma separated, repeated up to length N
        #[arg(long, value_name = "VALUES")]
        y_diagonal: Option<String>,
    },
    /// Cross-engine consistency suite
    Verify {
        /// Largest word length (at most 10)
        #[arg(long, default_value_t = 8)]
        degree: usize,
        /// Largest length of the sweep with a diagonal y1 (0 skips it)
        #[arg(long, default_value_t = 6)]
        y_degree: usize,
        /// Inline parameter given to the tree engine only (negative control)
        #[arg(long, value_name = "INLINE")]
        tree_param: Option<String>,
    },
    /// Structure of a test graph and its limiting injective trace
    Graph {
        /// Graph file, or inline JSON {"vertices": n, "edges": [[src, dst, "x1"], ...]}
        #[arg(long, value_name = "FILE|JSON")]
        graph: String,
        /// Family map for the free-product test, e.g. "x1=1,x2=1,y1=2" (default: one family per letter)
        #[arg(long)]
        family: Option<String>,
    },
}

enum Failure {
    Engine(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.shared.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        #[cfg(feature = "parallel")]
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = match &cli.command {
        Command::Moments { word, engine } => cmd_moments(&cli.shared, word, *engine),
        Command::Series { matrix, check } => cmd_series(&cli.shared, *matrix, *check),
        Command::Sd { word } => cmd_moments(&cli.shared, word, EngineArg::Sd),
        Command::Simulate { ensemble, alpha, alpha_stable, cutoff, weights, n, reps, word, y_diagonal } => {
            let spec = ensemble_spec(*ensemble, *alpha, *alpha_stable, *cutoff, *weights);
            spec.map_err(Failure::from).and_then(|s| cmd_simulate(&cli.shared, s, *n, *reps, word, y_diagonal.as_deref()))
        }
        Command::Verify { degree, y_degree, tree_param } => cmd_verify(&cli.shared, *degree, *y_degree, tree_param.as_deref()),
        Command::Graph { graph, family } => cmd_graph(&cli.shared, graph, family.as_deref()),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => 3,
                _ => 2,
            })
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(4)
        }
    }
}

fn read_json(path: &str) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::domain(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(0, format!("{path}: {e}")))
}

fn parse_words(ws: &[String]) -> Result<Vec<Word>, Error> {
    ws.iter().map(|w| w.parse()).collect()
}

/// Parameters for the heavy letters `xs` (with `need` entries when
/// symbolic or inline), and the y model.
fn model(sh: &Shared, xs: &BTreeSet<u32>, need: u32, has_y: bool) -> Result<(HeavyParams, YModel), Error> {
    let k = sh.kmax.unwrap_or(need).max(1);
    let (params, mut y) = match &sh.param {
        Some(p) if Path::new(p).is_file() => load_model(&read_json(p)?)?,
        Some(p) => {
            let seq = parse_inline(p, k)?;
            let mut hp = HeavyParams::new();
            for &j in xs {
                hp.set(j, seq.clone())?;
            }
            (hp, YModel::None)
        }
        None => (HeavyParams::symbolic(xs.iter().copied(), k)?, YModel::None),
    };
    if let Some(f) = &sh.y {
        y = load_model(&read_json(f)?)?.1;
    }
    if has_y && matches!(y, YModel::None) {
        y = YModel::Diagonal(DiagonalMoments::Symbolic);
    }
    Ok((params, y))
}

fn heavy_letters(words: &[Word]) -> BTreeSet<u32> {
    words.iter().flat_map(|w| w.0.iter()).filter(|l| l.is_x()).map(|l| l.index()).collect()
}

fn poly_json(p: &MomentPolynomial) -> Value {
    let mut v = json!({"polynomial": p.to_string(), "terms": p.to_json()});
    if let Some(c) = p.as_constant() {
        v["value"] = json!(format_rational(&c));
        v["approx"] = json!(to_f64(&c));
    }
    v
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cmd_moments(sh: &Shared, ws: &[String], engine: EngineArg) -> CmdResult {
    let words = parse_words(ws)?;
    let xs = heavy_letters(&words);
    let need = (words.iter().map(Word::x_degree).sum::<usize>() / 2).max(1) as u32;
    let has_y = words.iter().any(|w| w.0.iter().any(|l| !l.is_x()));
    let (params, y) = model(sh, &xs, need, has_y)?;
    let engines: Vec<Engine> = match engine {
        EngineArg::Tree => vec![Engine::Tree],
        EngineArg::Partition => vec![Engine::Partition],
        EngineArg::Sd => vec![Engine::Sd],
        EngineArg::All => Engine::ALL.to_vec(),
    };
    let exec = Execution::default();
    let mut results: Vec<(Engine, MomentPolynomial)> = Vec::new();
    for e in engines {
        let v = if e == Engine::Partition {
            let iws: Vec<InterleavedWord> = words.iter().map(InterleavedWord::from_word).collect();
            phi_k_bruteforce_with(&iws, &params, &y, sh.partition_cap, exec)?
        } else {
            evaluate(e, &words, &params, &y, None, exec)?
        };
        results.push((e, v));
    }
    let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
    let format = sh.format.unwrap_or(Format::Pretty);
    let words_s: Vec<String> = words.iter().map(Word::to_string).collect();
    match format {
        Format::Pretty => {
            if agree {
                println!("{}", results[0].1);
            } else {
                for (e, v) in &results {
                    println!("{e}: {v}");
                }
            }
        }
        Format::Csv => {
            println!("engine,polynomial,value");
            for (e, v) in &results {
                let val = v.as_constant().map(|c| format_rational(&c)).unwrap_or_default();
                println!("{e},{},{}", csv_field(&v.to_string()), csv_field(&val));
            }
        }
        Format::Json => {
            let per: BTreeMap<String, Value> = results.iter().map(|(e, v)| (e.to_string(), poly_json(v))).collect();
            let mut v = json!({"words": words_s, "engines": per, "agree": agree});
            if agree {
                v["result"] = poly_json(&results[0].1);
            }
            print_json(&v);
        }
    }
    if !agree {
        let diff: Vec<String> = results.iter().map(|(e, v)| format!("{e} = {v}")).collect();
        return Err(Failure::Verification(format!("engines disagree on {}: {}", words_s.join(" ∘ "), diff.join("; "))));
    }
    Ok(())
}

fn cmd_series(sh: &Shared, j: u32, check: bool) -> CmdResult {
    let k_rows = sh.kmax.unwrap_or(1).max(1) as usize;
    let need = (k_rows + sh.order / 2) as u32;
    let (params, _) = model(&Shared { kmax: None, ..sh.clone() }, &BTreeSet::from([j]), need, false)?;
    let table = series_g(&params, j, k_rows, sh.order)?;
    let report = if check { Some(series_vs_sd_report(&params, j, sh.order, k_rows)?) } else { None };
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = json!({
                "matrix": Letter::X(j).to_string(),
                "order": sh.order,
                "series": (1..=k_rows).map(|k| table.to_json(k)).collect::<Vec<_>>(),
            });
            if let Some(r) = &report {
                v["check"] = serde_json::to_value(r).expect("serializable");
            }
            print_json(&v);
        }
        Format::Csv => {
            println!("K,m,value");
            for k in 1..=k_rows {
                for (m, c) in table.row(k).iter().enumerate() {
                    println!("{k},{m},{}", csv_field(&c.to_string()));
                }
            }
        }
        Format::Pretty => {
            for k in 1..=k_rows {
                for (m, c) in table.row(k).iter().enumerate() {
                    println!("c_{k}[{m}] = {c}");
                }
            }
            if let Some(r) = &report {
                println!("check: {} coefficients, {}", r.checked, if r.ok() { "all agree" } else { "mismatch" });
            }
        }
    }
    match report.and_then(|r| r.mismatch) {
        Some(m) => Err(Failure::Verification(format!("c_{}[{}]: series {} vs recursion {}", m.k, m.m, m.series, m.direct))),
        None => Ok(()),
    }
}

fn ensemble_spec(e: EnsembleArg, alpha: Option<f64>, alpha_s: Option<f64>, cutoff: Option<f64>, w: WeightArg) -> Result<EnsembleSpec, Error> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Error::domain(format!("{flag} is required for this ensemble")));
    let spec = match e {
        EnsembleArg::ErdosRenyi => EnsembleSpec::ErdosRenyi { alpha: need(alpha, "--alpha")? },
        EnsembleArg::Network => EnsembleSpec::Network {
            alpha: need(alpha, "--alpha")?,
            weights: match w {
                WeightArg::Rademacher => WeightLaw::Rademacher,
                WeightArg::Gaussian => WeightLaw::Gaussian,
                WeightArg::Uniform => WeightLaw::Uniform,
            },
        },
        EnsembleArg::TruncatedLevy => {
            EnsembleSpec::TruncatedLevy { alpha_stable: need(alpha_s, "--alpha-stable")?, cutoff: need(cutoff, "--cutoff")? }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn cmd_simulate(sh: &Shared, spec: EnsembleSpec, n: usize, reps: usize, ws: &[String], y_diag: Option<&str>) -> CmdResult {
    let words = parse_words(ws)?;
    if let Some(l) = words.iter().flat_map(|w| w.0.iter()).find(|l| matches!(l, Letter::Y(j) if *j != 1)) {
        return Err(Error::domain(format!("only y1 can be bound (via --y-diagonal), found {l}")).into());
    }
    let has_y = words.iter().any(|w| w.0.iter().any(|l| !l.is_x()));
    let mut diagonal_y = BTreeMap::new();
    let mut y = YModel::None;
    match (y_diag, has_y) {
        (None, true) => return Err(Error::domain("words with y1 need --y-diagonal").into()),
        (Some(s), _) => {
            let tile: Vec<Q> = s.split(',').map(parse_rational).collect::<Result<_, _>>()?;
            if tile.is_empty() || n == 0 {
                return Err(Error::domain("empty diagonal").into());
            }
            let full: Vec<Q> = (0..n).map(|i| tile[i % tile.len()].clone()).collect();
            let degree = words.iter().map(Word::len).sum::<usize>().max(1);
            let moments = (1..=degree)
                .map(|k| full.iter().map(|d| (0..k).fold(q(1), |p, _| p * d)).fold(q(0), |a, b| a + b) / q(n as i64))
                .collect();
            y = YModel::Diagonal(DiagonalMoments::single(1, moments));
            diagonal_y.insert(1, full.iter().map(to_f64).collect());
        }
        (None, false) => {}
    }
    let cfg = SimulationConfig { spec: spec.clone(), n, replicates: reps, base_seed: sh.seed, diagonal_y };
    let res = simulate(&cfg, &words, Execution::default())?;
    let xs = heavy_letters(&words);
    let need = (words.iter().map(Word::x_degree).sum::<usize>() / 2).max(1) as u32;
    let params = ensemble_parameter(&spec, xs, need)?;
    let iws: Vec<InterleavedWord> = words.iter().map(InterleavedWord::from_word).collect();
    let limit = phi_k(&iws, &params, &y)?;
    let predicted = limit.as_constant().map(|c| to_f64(&c)).unwrap_or(f64::NAN);
    let z = (res.mean - predicted) / res.stderr;
    let allowance = FINITE_SIZE_C / n as f64;
    let within = (res.mean - predicted).abs() <= 4.0 * res.stderr + allowance;
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(&res).expect("serializable");
            v["ensemble"] = serde_json::to_value(&spec).expect("serializable");
            v["words"] = json!(words.iter().map(Word::to_string).collect::<Vec<_>>());
            v["predicted"] = json!(predicted);
            v["predicted_exact"] = json!(limit.to_string());
            v["z"] = json!(z);
            v["finite_size_allowance"] = json!(allowance);
            v["within_tolerance"] = json!(within);
            print_json(&v);
        }
        Format::Csv => {
            println!("mean,stderr,replicates,N,seed,predicted,z,within_tolerance");
            println!("{},{},{},{},{},{},{},{}", res.mean, res.stderr, res.replicates, res.n, res.seed, predicted, z, within);
        }
        Format::Pretty => {
            println!("mean = {} ± {} ({} replicates, N = {})", res.mean, res.stderr, res.replicates, res.n);
            println!("limit = {limit} ({predicted}), z = {z:.3}, within tolerance: {within}");
        }
    }
    Ok(())
}

fn cmd_verify(sh: &Shared, degree: usize, y_degree: usize, tree_param: Option<&str>) -> CmdResult {
    let k = sh.kmax.unwrap_or((degree / 2).max(1) as u32).max(1);
    let mut cfg = VerifyConfig::symbolic(degree)?;
    cfg.y_degree = y_degree;
    cfg.params = match &sh.param {
        Some(p) if Path::new(p).is_file() => load_model(&read_json(p)?)?.0,
        Some(p) => {
            let seq = parse_inline(p, k)?;
            HeavyParams::new().with(1, seq.clone())?.with(2, seq)?
        }
        None => HeavyParams::symbolic([1, 2], k)?,
    };
    if let Some(t) = tree_param {
        let seq: ParamSeq = parse_inline(t, k)?;
        cfg.tree_params = Some(cfg.params.clone().with(1, seq.clone())?.with(2, seq)?);
    }
    let report = run_verify(&cfg)?;
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => print_json(&serde_json::to_value(&report).expect("serializable")),
        Format::Csv => {
            println!("check,passed,checked,counterexample");
            for c in &report.checks {
                let cx = c.counterexample.as_ref().map(|x| x.word.clone()).unwrap_or_default();
                println!("{},{},{},{}", c.name, c.passed, c.checked, csv_field(&cx));
            }
        }
        Format::Pretty => {
            for c in &report.checks {
                println!("{:<22} {} ({} checked)", c.name, if c.passed { "ok" } else { "FAILED" }, c.checked);
            }
        }
    }
    if report.passed {
        return Ok(());
    }
    let msg = match report.first_counterexample() {
        Some(cx) => {
            let vals: Vec<String> = cx.values.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            format!("first counterexample {}: {}", cx.word, vals.join("; "))
        }
        None => report.checks.iter().filter_map(|c| c.detail.clone()).next().unwrap_or_default(),
    };
    Err(Failure::Verification(msg))
}

fn parse_family(s: &str) -> Result<BTreeMap<Letter, u32>, Error> {
    let mut m = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (l, f) = part.split_once('=').ok_or_else(|| Error::parse(0, format!("expected letter=family, got {part:?}")))?;
        let f: u32 = f.trim().parse().map_err(|_| Error::parse(0, format!("bad family id in {part:?}")))?;
        m.insert(Letter::parse(l.trim())?, f);
    }
    Ok(m)
}

fn cmd_graph(sh: &Shared, src: &str, family: Option<&str>) -> CmdResult {
    let v = if src.trim_start().starts_with('{') {
        serde_json::from_str(src).map_err(|e| Error::parse(e.column().saturating_sub(1), format!("graph JSON: {e}")))?
    } else {
        read_json(src)?
    };
    let t = StarTestGraph::from_json(&v)?;
    let letters: Vec<Letter> = t.edges().iter().map(|e| e.label).collect();
    let xs: BTreeSet<u32> = letters.iter().filter(|l| l.is_x()).map(|l| l.index()).collect();
    let need = (t.num_edges() / 2).max(1) as u32;
    let (params, _) = model(sh, &xs, need, false)?;
    let fam_map = family.map(parse_family).transpose()?;
    let family_of = |l: Letter| -> u32 {
        match &fam_map {
            Some(m) => m.get(&l).copied().unwrap_or(u32::MAX),
            None => match l {
                Letter::X(j) => 2 * j,
                Letter::Y(j) => 2 * j + 1,
            },
        }
    };
    let profile = fat_tree_profile(&t);
    let bridges = two_edge_structure(&t);
    let limit = limit_injective_trace(&t, &params)?;
    let comps = family_components(&t, &family_of);
    let out = json!({
        "vertices": t.num_vertices(),
        "edges": t.num_edges(),
        "cyclic": t.is_cyclic(),
        "fat_tree": profile.is_some(),
        "type": profile.as_ref().and_then(|p| p.type_vector()),
        "r": bridges.leaf_count,
        "bridges": bridges.bridges,
        "two_edge_components": bridges.components,
        "free_product": is_free_product(&t, &family_of),
        "family_components": comps.len(),
        "limit": limit.to_string(),
        "limit_terms": limit.to_json(),
    });
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => print_json(&out),
        Format::Csv | Format::Pretty => {
            let sep = if sh.format == Some(Format::Csv) { "," } else { ": " };
            if sh.format == Some(Format::Csv) {
                println!("key,value");
            }
            for (k, v) in out.as_object().expect("object") {
                if k != "limit_terms" {
                    let s = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
                    println!("{k}{sep}{}", if sep == "," { csv_field(&s) } else { s });
                }
            }
        }
    }
    Ok(())
}
