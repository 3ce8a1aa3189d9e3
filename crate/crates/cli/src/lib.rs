//! `haarforge` command line. [`run`] is the whole program; `main` only
//! wires it to the process streams so tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 a negative answer (`iso` on non-isomorphic
//! inputs, a failed verification), 2 usage errors, 3 internal errors.

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use haarforge::catalog::load_group_file;
use haarforge::census::{enumerate_haar_census, CensusConfig, CensusFilter};
use haarforge::classify::{classify, verify_haar_witness, verify_theorems, ClassifyError};
use haarforge::graph::{
    bicayley_graph, cayley_graph, cyclic_cover_sigma0, double_generalized_petersen, generalized_petersen,
    haar_graph, kronecker_cover, voltage_double_cover,
};
use haarforge::graph6::{decode_graph6, encode_graph6_string};
use haarforge::groups::{cyclic, direct_product, generalized_dihedral, semidirect_cyclic};
use haarforge::search::find_isomorphism;
use haarforge::{ElementSubset, FiniteGroup, Graph};

pub const EXIT_NO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

/// Environment variable that takes precedence over `--workers`.
pub const WORKERS_ENV: &str = "HAARFORGE_WORKERS";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "haarforge", version, about = "Build and classify Haar, Cayley and Petersen-type graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a graph and print it as graph6.
    Construct(ConstructArgs),
    /// Classify graph6 input and print a JSON report per graph.
    Analyze {
        /// graph6 file, `-` for stdin, or a literal graph6 string.
        #[arg(default_value = "-")]
        input: String,
        /// One JSON object per line instead of pretty output.
        #[arg(long)]
        compact: bool,
    },
    /// Decide whether two graphs are isomorphic (exit 0 yes, 1 no).
    Iso {
        first: String,
        second: String,
        /// Print a JSON object with the isomorphism, if any.
        #[arg(long)]
        json: bool,
    },
    /// Build and check the delta automorphism of D(n, r).
    Delta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compare computed symmetry of every D(n, r) against the predictions.
    VerifyTheorems {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Enumerate connected Haar graphs over a group catalog.
    Census(CensusArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    /// Double generalized Petersen graph D(n, r).
    Dgp,
    /// Generalized Petersen graph G(n, r).
    Gp,
    /// Tetracirculant Σ₀(n, a, k, b).
    Sigma0,
    /// Kronecker cover of G(n, r).
    GpKronecker,
    /// Double cover of G(n, r) with voltage on the inner edges.
    GpInnerCover,
    Cayley,
    Haar,
    Bicayley,
}

#[derive(clap::Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<i64>,
    /// Catalog file, or `cyclic:N`, `dihedral:N`, `product:M,N`, `semidirect:M,K,R`.
    #[arg(long)]
    group: Option<String>,
    /// Connection set as comma-separated element indices.
    #[arg(long)]
    subset: Option<String>,
    /// Bi-Cayley left set.
    #[arg(long)]
    left: Option<String>,
    /// Bi-Cayley right set.
    #[arg(long)]
    right: Option<String>,
    /// Print the adjacency list instead of graph6.
    #[arg(long)]
    adjacency: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct CensusArgs {
    #[arg(long, default_value = "data/groups/order20")]
    catalog: PathBuf,
    /// Graph order or range, e.g. `40` or `10-40`.
    #[arg(long, default_value = "40")]
    order: String,
    /// Valency or range, e.g. `3` or `3-17`.
    #[arg(long, default_value = "3")]
    valency: String,
    #[arg(long, default_value = "all")]
    filter: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// JSON-lines record file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stratum checkpoint; an existing one resumes the run.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Print JSON lines on stdout instead of graph6 certificates.
    #[arg(long)]
    json: bool,
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    match cmd {
        Command::Construct(args) => construct(&args, out),
        Command::Analyze { input, compact } => {
            let graphs = read_graphs(&input, stdin)?;
            for g in &graphs {
                let report = classify(g);
                let text = if compact || graphs.len() > 1 {
                    serde_json::to_string(&report).map_err(internal)?
                } else {
                    report.to_json()
                };
                writeln!(out, "{text}").map_err(internal)?;
            }
            Ok(0)
        }
        Command::Iso { first, second, json } => {
            let a = single_graph(&first, stdin)?;
            let b = single_graph(&second, stdin)?;
            let iso = find_isomorphism(&a, &b);
            if json {
                let v = serde_json::json!({ "isomorphic": iso.is_some(), "mapping": iso });
                writeln!(out, "{v}").map_err(internal)?;
            } else {
                writeln!(out, "{}", if iso.is_some() { "yes" } else { "no" }).map_err(internal)?;
            }
            Ok(if iso.is_some() { 0 } else { EXIT_NO })
        }
        Command::Delta { n, r, json } => delta(n, r, json, out),
        Command::VerifyTheorems { max_n, json } => {
            if max_n < 3 {
                return Err(usage("--max-n must be at least 3"));
            }
            let sweep = verify_theorems(max_n);
            let bad = sweep.mismatches().len();
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&sweep).map_err(internal)?).map_err(internal)?;
            } else {
                writeln!(out, "{:>4} {:>4}  {:<24} {:>5} {:>6} {:>5}  {:>10}  result", "n", "r", "branch", "vt", "cayley", "haar", "|Aut|")
                    .map_err(internal)?;
                for row in &sweep.rows {
                    let p = &row.prediction;
                    let branch = serde_json::to_value(p.branch).map_err(internal)?;
                    writeln!(
                        out,
                        "{:>4} {:>4}  {:<24} {:>5} {:>6} {:>5}  {:>10}  {}",
                        p.n,
                        p.r,
                        branch.as_str().unwrap_or("?"),
                        row.vertex_transitive,
                        row.cayley,
                        row.haar,
                        row.aut_order,
                        if row.agrees() { "pass" } else { "FAIL" }
                    )
                    .map_err(internal)?;
                }
            }
            writeln!(err, "{} cases, {bad} mismatches", sweep.rows.len()).map_err(internal)?;
            Ok(if bad == 0 { 0 } else { EXIT_NO })
        }
        Command::Census(args) => census(&args, out, err),
    }
}

fn need<T>(value: Option<T>, name: &str, family: Family) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("--{name} is required for --family {family:?}").to_lowercase()))
}

fn construct(args: &ConstructArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let f = args.family;
    let graph = match f {
        Family::Dgp => double_generalized_petersen(need(args.n, "n", f)?, need(args.r, "r", f)?).map(|(g, _)| g),
        Family::Gp => generalized_petersen(need(args.n, "n", f)?, need(args.r, "r", f)?),
        Family::GpKronecker => generalized_petersen(need(args.n, "n", f)?, need(args.r, "r", f)?).map(|g| kronecker_cover(&g)),
        Family::GpInnerCover => {
            let n = need(args.n, "n", f)?;
            generalized_petersen(n, need(args.r, "r", f)?).and_then(|g| {
                let inner: Vec<_> = g.edges().filter(|&(u, v)| u >= n && v >= n).collect();
                voltage_double_cover(&g, &inner)
            })
        }
        Family::Sigma0 => {
            cyclic_cover_sigma0(need(args.n, "n", f)?, need(args.a, "a", f)?, need(args.k, "k", f)?, need(args.b, "b", f)?)
        }
        Family::Cayley | Family::Haar | Family::Bicayley => {
            let group = parse_group_spec(&need(args.group.clone(), "group", f)?)?;
            let s = parse_subset(&group, &need(args.subset.clone(), "subset", f)?)?;
            match f {
                Family::Cayley => cayley_graph(&group, &s),
                Family::Haar => haar_graph(&group, &s),
                _ => {
                    let l = parse_subset(&group, args.left.as_deref().unwrap_or(""))?;
                    let r = parse_subset(&group, args.right.as_deref().unwrap_or(""))?;
                    bicayley_graph(&group, &l, &r, &s)
                }
            }
        }
    }
    .map_err(usage)?;
    let text = if args.adjacency { graph.to_adjacency_text() } else { encode_graph6_string(&graph).map_err(usage)? + "\n" };
    match &args.out {
        Some(path) => fs::write(path, text).map_err(|e| internal(format!("{}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes()).map_err(internal)?,
    }
    Ok(0)
}

fn parse_numbers(list: &str) -> Result<Vec<i64>, CliError> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| usage(format!("not an integer: {t:?}"))))
        .collect()
}

fn parse_group_spec(spec: &str) -> Result<FiniteGroup, CliError> {
    let Some((kind, params)) = spec.split_once(':') else {
        return load_group_file(Path::new(spec)).map_err(usage);
    };
    let p = parse_numbers(params)?;
    let u = |i: usize| -> Result<usize, CliError> {
        p.get(i).and_then(|&x| usize::try_from(x).ok()).ok_or_else(|| usage(format!("bad group parameters in {spec:?}")))
    };
    match kind {
        "cyclic" => cyclic(u(0)?).map_err(usage),
        "dihedral" => generalized_dihedral(&cyclic(u(0)?).map_err(usage)?).map_err(usage),
        "product" => Ok(direct_product(&cyclic(u(0)?).map_err(usage)?, &cyclic(u(1)?).map_err(usage)?)),
        "semidirect" => semidirect_cyclic(u(0)?, u(1)?, *p.get(2).ok_or_else(|| usage("semidirect needs M,K,R"))?)
            .map_err(usage),
        other => Err(usage(format!("unknown group family {other:?}"))),
    }
}

fn parse_subset(group: &FiniteGroup, list: &str) -> Result<ElementSubset, CliError> {
    let members = parse_numbers(list)?
        .into_iter()
        .map(|x| usize::try_from(x).map_err(|_| usage(format!("negative element index {x}"))))
        .collect::<Result<Vec<_>, _>>()?;
    ElementSubset::new(group, members).map_err(usage)
}

/// Reads `-` (stdin), a file, or a literal graph6 string.
fn read_source(source: &str, stdin: &mut dyn BufRead) -> Result<String, CliError> {
    if source == "-" {
        let mut text = String::new();
        stdin.read_to_string(&mut text).map_err(internal)?;
        return Ok(text);
    }
    let path = Path::new(source);
    if path.is_file() {
        return fs::read_to_string(path).map_err(|e| usage(format!("{source}: {e}")));
    }
    Ok(source.to_owned())
}

fn read_graphs(source: &str, stdin: &mut dyn BufRead) -> Result<Vec<Graph>, CliError> {
    let text = read_source(source, stdin)?;
    let graphs = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| decode_graph6(l.as_bytes()).map_err(|e| usage(format!("{source}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if graphs.is_empty() {
        return Err(usage(format!("{source}: no graph6 input")));
    }
    Ok(graphs)
}

fn single_graph(source: &str, stdin: &mut dyn BufRead) -> Result<Graph, CliError> {
    let mut graphs = read_graphs(source, stdin)?;
    if graphs.len() != 1 {
        return Err(usage(format!("{source}: expected one graph, found {}", graphs.len())));
    }
    Ok(graphs.remove(0))
}

fn delta(n: usize, r: usize, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let report = match verify_haar_witness(n, r) {
        Ok(rep) => rep,
        Err(
            e @ (ClassifyError::OddN { .. }
            | ClassifyError::NotNegativeResidue { .. }
            | ClassifyError::InvalidParameters { .. }),
        ) => return Err(usage(e)),
        Err(e) => return Err(internal(e)),
    };
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(internal)?).map_err(internal)?;
    } else {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        let lines = [
            format!("D({n},{r}): m = {}, normalized r = {}", report.m, report.r),
            "delta preserves edges and parts: pass".to_owned(),
            format!(
                "conjugate of alpha^2 by delta: {}",
                report.conjugation_exponent.map_or("FAIL".to_owned(), |e| format!("alpha^{e} (pass)"))
            ),
            format!("|<alpha^2, delta>| = {} (expected {}): {}", report.group_order, 2 * n, mark(report.group_order == 2 * n as u64)),
            format!("regular on part 0: {}", mark(report.regular_on_part0)),
            format!("regular on part 1: {}", mark(report.regular_on_part1)),
            format!("order profile of Z_{} x|_{} Z_4: {}", report.m, report.r, mark(report.order_profile_matches)),
        ];
        for line in lines {
            writeln!(out, "{line}").map_err(internal)?;
        }
    }
    Ok(if report.passed() { 0 } else { EXIT_NO })
}

fn parse_range(text: &str, what: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || usage(format!("bad {what} range {text:?}"));
    let (lo, hi) = match text.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn census(args: &CensusArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let workers = match std::env::var(WORKERS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{WORKERS_ENV}={v:?} is not a count")))?,
        Err(_) => args.workers,
    };
    let valencies = parse_range(&args.valency, "valency")?;
    if *valencies.start() == 0 {
        return Err(usage("valencies start at 1"));
    }
    let cfg = CensusConfig {
        catalog: args.catalog.clone(),
        orders: parse_range(&args.order, "order")?,
        valencies,
        filter: args.filter.parse::<CensusFilter>().map_err(usage)?,
        workers,
        output: args.out.clone(),
        checkpoint: args.checkpoint.clone(),
    };
    let outcome = enumerate_haar_census(&cfg).map_err(|e| match e {
        haarforge::census::CensusError::Catalog(_) | haarforge::census::CensusError::BadValencyRange(_) => usage(e),
        other => internal(other),
    })?;
    for rec in &outcome.records {
        if args.json {
            writeln!(out, "{}", serde_json::to_string(rec).map_err(internal)?).map_err(internal)?;
        } else {
            writeln!(out, "{}", rec.certificate).map_err(internal)?;
        }
    }
    writeln!(err, "{}", serde_json::to_string(&outcome.summary).map_err(internal)?).map_err(internal)?;
    Ok(0)
}
