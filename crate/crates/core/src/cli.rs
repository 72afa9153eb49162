//! Command-line front end: `solve`, `bench`, and `gen`.
//!
//! Exit codes: 0 success, 1 runtime or input failure, 2 usage error,
//! 3 oracle mismatch.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::convolution::ConvolutionMode;
use crate::cutcount::{decide_constrained_cvcp3, minimize_cvcp3, CountOptions, Decision};
use crate::decomposition::{heuristic_decompose, make_nice, NiceDecomposition, Strategy, TreeDecomposition};
use crate::error::Error;
use crate::format::{emit_gr, emit_td, parse_graph, parse_td, GraphFormat};
use crate::generate::{generate, Family, InstanceSpec};
use crate::graph::{is_vcp3_set, Graph, VertexSet};
use crate::oracle::{brute_cvcp3, brute_vcp3, CVCP3_LIMIT, VCP3_LIMIT};
use crate::vcp3::{solve_vcp3, SolveOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "vcp3", version, about = "Vertex cover P3 solvers for graphs of bounded treewidth")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Time the solver on generated instance families.
    Bench(BenchArgs),
    /// Write a generated instance as `.gr` (and `.td` when planted).
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Vcp3,
    Cvcp3,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub problem: Problem,
    #[arg(long)]
    pub graph: PathBuf,
    /// `gr` or `edge-list`; by default `.gr` files are PACE and anything else an edge list.
    #[arg(long)]
    pub format: Option<GraphFormat>,
    /// PACE `.td` file; without it a heuristic decomposition is computed.
    #[arg(long)]
    pub td: Option<PathBuf>,
    #[arg(long, default_value = "min-fill")]
    pub heuristic: Strategy,
    /// Budget for the connected variant; without it the minimum is searched.
    #[arg(long)]
    pub k: Option<usize>,
    /// Required vertices for the connected variant, comma separated, 0-indexed.
    #[arg(long = "S", value_name = "LIST")]
    pub required: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, default_value = "auto")]
    pub convolution: ConvolutionMode,
    /// Compare against brute force (only for small graphs).
    #[arg(long)]
    pub oracle_check: bool,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Print the report as JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[arg(long, default_value = "partial-k-tree")]
    pub family: Family,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "60")]
    pub n: Vec<usize>,
    /// Partial k-tree widths, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub k: Vec<usize>,
    /// Edge deletion probability for partial k-trees.
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Edge count for random-gnm (default: n).
    #[arg(long)]
    pub m: Option<usize>,
    /// Instances per parameter combination.
    #[arg(long, default_value_t = 3)]
    pub instances: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "vcp3")]
    pub problem: Problem,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value = "auto")]
    pub convolution: ConvolutionMode,
    #[arg(long)]
    pub oracle: bool,
    /// Write rows as CSV to this path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path without extension.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Runtime(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(e) => write!(f, "error: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Size(usize),
    Decision(Decision),
    NoSolution,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Answer::Size(s) => write!(f, "{s}"),
            Answer::Decision(d) => write!(f, "{d}"),
            Answer::NoSolution => f.write_str("no-solution"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub expected: Option<Answer>,
    /// `None` when the graph is too large for brute force.
    pub agrees: Option<bool>,
}

/// Outcome of one `solve`. Wall times are left out of the JSON form so that
/// identical inputs give identical bytes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: Problem,
    pub vertices: usize,
    pub edges: usize,
    pub answer: Answer,
    pub witness: Option<Vec<usize>>,
    pub k: Option<usize>,
    pub required: Vec<usize>,
    pub decomposition: String,
    pub width: usize,
    pub node_counts: BTreeMap<String, usize>,
    pub convolution: Option<String>,
    pub seed: Option<u64>,
    pub repetitions: Option<usize>,
    pub oracle: Option<OracleCheck>,
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn oracle_mismatch(&self) -> bool {
        self.oracle.as_ref().is_some_and(|o| o.agrees == Some(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// `key: value` lines, in a fixed order.
    pub fn to_text(&self) -> String {
        let problem = match self.problem {
            Problem::Vcp3 => "vcp3",
            Problem::Cvcp3 => "cvcp3",
        };
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut lines = vec![
            format!("problem: {problem}"),
            format!("vertices: {}", self.vertices),
            format!("edges: {}", self.edges),
            format!("answer: {}", self.answer),
        ];
        if let Some(w) = &self.witness {
            lines.push(format!("witness: {}", list(w)));
        }
        if let Some(k) = self.k {
            lines.push(format!("k: {k}"));
        }
        if self.problem == Problem::Cvcp3 {
            let req = if self.required.is_empty() { "none".to_string() } else { list(&self.required) };
            lines.push(format!("required: {req}"));
        }
        lines.push(format!("decomposition: {}", self.decomposition));
        lines.push(format!("width: {}", self.width));
        for (kind, count) in &self.node_counts {
            lines.push(format!("nodes.{kind}: {count}"));
        }
        if let Some(c) = &self.convolution {
            lines.push(format!("convolution: {c}"));
        }
        if let Some(s) = self.seed {
            lines.push(format!("seed: {s}"));
        }
        if let Some(r) = self.repetitions {
            lines.push(format!("repetitions: {r}"));
        }
        if let Some(o) = &self.oracle {
            let verdict = match o.agrees {
                Some(true) => "pass".to_string(),
                Some(false) => format!(
                    "MISMATCH (expected {})",
                    o.expected.as_ref().map_or("?".into(), |a| a.to_string())
                ),
                None => "skipped (graph too large)".to_string(),
            };
            lines.push(format!("oracle-check: {verdict}"));
        }
        for (phase, secs) in &self.timings {
            lines.push(format!("time.{phase}: {secs:.6}s"));
        }
        lines.join("\n") + "\n"
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))))
}

fn graph_format(path: &Path, explicit: Option<GraphFormat>) -> GraphFormat {
    explicit.unwrap_or(match path.extension().and_then(|e| e.to_str()) {
        Some("gr") => GraphFormat::PaceGr,
        _ => GraphFormat::EdgeList,
    })
}

fn parse_required(list: Option<&str>, n: usize) -> Result<VertexSet, CliError> {
    let Some(list) = list else {
        return Ok(VertexSet::new());
    };
    let mut ids = Vec::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|_| CliError::Usage(format!("--S: '{tok}' is not a vertex id")))?;
        ids.push(v);
    }
    VertexSet::checked(ids, n).map_err(|e| CliError::Usage(format!("--S: {e}")))
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    if threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Runtime(Error::InvalidParameters(e.to_string())))?;
    Ok(pool.install(f))
}

fn timed<T>(timings: &mut Vec<(String, f64)>, phase: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((phase.to_string(), start.elapsed().as_secs_f64()));
    out
}

fn node_counts(nd: &NiceDecomposition) -> BTreeMap<String, usize> {
    nd.kind_counts().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub fn cmd_solve(args: &SolveArgs) -> Result<RunReport, CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if args.problem == Problem::Vcp3 && (args.k.is_some() || args.required.is_some()) {
        return Err(CliError::Usage("--k and --S apply to --problem cvcp3 only".into()));
    }
    let mut timings = Vec::new();
    let text = read_file(&args.graph)?;
    let g = timed(&mut timings, "parse", || parse_graph(&text, graph_format(&args.graph, args.format)))?;
    let n = g.vertex_count();
    let required = parse_required(args.required.as_deref(), n)?;

    let (td, source): (TreeDecomposition, String) = match &args.td {
        Some(path) => {
            let t = read_file(path)?;
            (parse_td(&t)?, "file".into())
        }
        None => (
            timed(&mut timings, "decompose", || heuristic_decompose(&g, args.heuristic)),
            args.heuristic.to_string(),
        ),
    };
    let nd = timed(&mut timings, "nice", || make_nice(&td, &g))?;
    let parallel = args.threads > 1;

    let mut report = RunReport {
        problem: args.problem,
        vertices: n,
        edges: g.edge_count(),
        answer: Answer::NoSolution,
        witness: None,
        k: args.k,
        required: required.iter().collect(),
        decomposition: source,
        width: nd.width(),
        node_counts: node_counts(&nd),
        convolution: None,
        seed: None,
        repetitions: None,
        oracle: None,
        timings: Vec::new(),
    };

    match args.problem {
        Problem::Vcp3 => {
            let opts = SolveOptions {
                convolution: args.convolution,
                parallel,
            };
            let sol = with_threads(args.threads, || {
                timed(&mut timings, "solve", || solve_vcp3(&g, &nd, opts))
            })??;
            if !is_vcp3_set(&g, &sol.witness) || sol.witness.len() != sol.size {
                return Err(CliError::Runtime(Error::InvalidParameters(
                    "internal error: witness failed verification".into(),
                )));
            }
            report.answer = Answer::Size(sol.size);
            report.witness = Some(sol.witness.iter().collect());
            report.convolution = Some(args.convolution.to_string());
            if args.oracle_check {
                report.oracle = Some(timed(&mut timings, "oracle", || vcp3_oracle(&g, &report.answer)));
            }
        }
        Problem::Cvcp3 => {
            let opts = CountOptions {
                parallel,
                ..CountOptions::default()
            };
            let answer = with_threads(args.threads, || {
                timed(&mut timings, "solve", || -> crate::Result<Answer> {
                    Ok(match args.k {
                        Some(k) => Answer::Decision(decide_constrained_cvcp3(
                            &g, &nd, &required, k, args.seed, args.reps, opts,
                        )?),
                        None => match minimize_cvcp3(&g, &nd, &required, args.seed, args.reps, opts)? {
                            Some(size) => Answer::Size(size),
                            None => Answer::NoSolution,
                        },
                    })
                })
            })??;
            report.answer = answer;
            report.seed = Some(args.seed);
            report.repetitions = Some(args.reps);
            if args.oracle_check {
                report.oracle = Some(timed(&mut timings, "oracle", || {
                    cvcp3_oracle(&g, &required, args.k, &report.answer)
                }));
            }
        }
    }
    report.timings = timings;
    Ok(report)
}

fn vcp3_oracle(g: &Graph, answer: &Answer) -> OracleCheck {
    if g.vertex_count() > VCP3_LIMIT {
        return OracleCheck { expected: None, agrees: None };
    }
    let expected = Answer::Size(brute_vcp3(g).expect("size checked").size);
    OracleCheck {
        agrees: Some(&expected == answer),
        expected: Some(expected),
    }
}

fn cvcp3_oracle(g: &Graph, s: &VertexSet, k: Option<usize>, answer: &Answer) -> OracleCheck {
    if g.vertex_count() > CVCP3_LIMIT {
        return OracleCheck { expected: None, agrees: None };
    }
    let best = brute_cvcp3(g, s).expect("size checked");
    let expected = match k {
        Some(k) => Answer::Decision(if best.is_some_and(|b| b <= k) { Decision::Yes } else { Decision::No }),
        None => best.map_or(Answer::NoSolution, Answer::Size),
    };
    OracleCheck {
        agrees: Some(&expected == answer),
        expected: Some(expected),
    }
}

/// One benchmark measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
    pub width: usize,
    pub answer: String,
    pub solver_seconds: f64,
    pub oracle_seconds: Option<f64>,
    pub oracle_agrees: Option<bool>,
}

pub fn bench_rows(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let ks: Vec<usize> = if args.family == Family::PartialKTree { args.k.clone() } else { vec![0] };
    let mut rows = Vec::new();
    for &n in &args.n {
        for &k in &ks {
            for i in 0..args.instances {
                let seed = args.seed + i;
                let spec = InstanceSpec {
                    k,
                    deletion_probability: args.p,
                    m: args.m.unwrap_or(n),
                    ..InstanceSpec::new(args.family, n, seed)
                };
                let (g, planted) = generate(&spec)?;
                let td = planted.unwrap_or_else(|| heuristic_decompose(&g, Strategy::MinFill));
                let nd = make_nice(&td, &g)?;
                let parallel = args.threads > 1;
                let start = Instant::now();
                let answer = with_threads(args.threads, || -> crate::Result<Answer> {
                    Ok(match args.problem {
                        Problem::Vcp3 => {
                            let opts = SolveOptions {
                                convolution: args.convolution,
                                parallel,
                            };
                            Answer::Size(solve_vcp3(&g, &nd, opts)?.size)
                        }
                        Problem::Cvcp3 => {
                            let opts = CountOptions {
                                parallel,
                                ..CountOptions::default()
                            };
                            minimize_cvcp3(&g, &nd, &VertexSet::new(), seed, args.reps, opts)?
                                .map_or(Answer::NoSolution, Answer::Size)
                        }
                    })
                })??;
                let solver_seconds = start.elapsed().as_secs_f64();
                let (oracle_seconds, oracle_agrees) = if args.oracle {
                    let start = Instant::now();
                    let check = match args.problem {
                        Problem::Vcp3 => vcp3_oracle(&g, &answer),
                        Problem::Cvcp3 => cvcp3_oracle(&g, &VertexSet::new(), None, &answer),
                    };
                    (Some(start.elapsed().as_secs_f64()), check.agrees)
                } else {
                    (None, None)
                };
                rows.push(BenchRow {
                    family: args.family.to_string(),
                    n,
                    m: g.edge_count(),
                    k,
                    seed,
                    width: nd.width(),
                    answer: answer.to_string(),
                    solver_seconds,
                    oracle_seconds,
                    oracle_agrees,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> crate::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::InvalidParameters(format!("csv: {e}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> crate::Result<Vec<BenchRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<Result<Vec<BenchRow>, _>>()
        .map_err(|e| Error::InvalidParameters(format!("csv: {e}")))
}

/// Fixed-width table followed by mean solver time per width.
pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:<15} {:>6} {:>6} {:>3} {:>6} {:>5} {:>12} {:>12} {:>12}\n",
        "family", "n", "m", "k", "seed", "width", "answer", "solver_s", "oracle_s"
    );
    for r in rows {
        out += &format!(
            "{:<15} {:>6} {:>6} {:>3} {:>6} {:>5} {:>12} {:>12.6} {:>12}\n",
            r.family,
            r.n,
            r.m,
            r.k,
            r.seed,
            r.width,
            r.answer,
            r.solver_seconds,
            r.oracle_seconds.map_or("-".into(), |s| format!("{s:.6}")),
        );
    }
    let mut by_width: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for r in rows {
        let e = by_width.entry(r.width).or_default();
        e.0 += r.solver_seconds;
        e.1 += 1;
    }
    out += "\nwidth  instances  mean_solver_s\n";
    for (w, (total, count)) in by_width {
        out += &format!("{w:>5}  {count:>9}  {:>13.6}\n", total / count as f64);
    }
    out
}

pub fn cmd_gen(args: &GenArgs) -> Result<Vec<PathBuf>, CliError> {
    let spec = InstanceSpec {
        k: args.k,
        deletion_probability: args.p,
        m: args.m.unwrap_or(args.n),
        ..InstanceSpec::new(args.family, args.n, args.seed)
    };
    let (g, td) = generate(&spec)?;
    let gr = args.out.with_extension("gr");
    std::fs::write(&gr, emit_gr(&g)).map_err(Error::Io)?;
    let mut written = vec![gr];
    if let Some(td) = td {
        let path = args.out.with_extension("td");
        std::fs::write(&path, emit_td(&td, g.vertex_count())).map_err(Error::Io)?;
        written.push(path);
    }
    Ok(written)
}

/// Parses `argv` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to stderr. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Runtime(Error::Io(e));
    match command {
        Command::Solve(args) => {
            let report = cmd_solve(args)?;
            let body = if args.json { report.to_json() + "\n" } else { report.to_text() };
            out.write_all(body.as_bytes()).map_err(io)?;
            if report.oracle_mismatch() {
                eprintln!("oracle mismatch: solver answered {}", report.answer);
                return Ok(EXIT_MISMATCH);
            }
            Ok(EXIT_OK)
        }
        Command::Bench(args) => {
            let rows = bench_rows(args)?;
            out.write_all(bench_table(&rows).as_bytes()).map_err(io)?;
            if let Some(path) = &args.csv {
                let file = std::fs::File::create(path).map_err(io)?;
                write_csv(&rows, file)?;
            }
            if rows.iter().any(|r| r.oracle_agrees == Some(false)) {
                eprintln!("oracle mismatch in benchmark");
                return Ok(EXIT_MISMATCH);
            }
            Ok(EXIT_OK)
        }
        Command::Gen(args) => {
            for path in cmd_gen(args)? {
                writeln!(out, "{}", path.display()).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}
