//! Command-line front end: `map`, `bench` and `verify`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::arch::CouplingGraph;
use crate::circuit::LogicalCircuit;
use crate::mapping::MapFile;
use crate::pipeline::{run_pipeline, Compiled, PipelineConfig};
use crate::placement::PlacementConfig;
use crate::qasm::{parse_qasm, serialize_qasm};
use crate::router::{RouterConfig, SwapSelector};
use crate::verify::{check_connectivity, equivalent, MAX_UNITARY_QUBITS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOO_MANY_QUBITS: i32 = 3;

/// Environment variable that takes precedence over `--seed`.
pub const SEED_ENV: &str = "TANGO_SEED";

pub const CSV_HEADER: &str = "benchmark,qubits,cnot_in,depth_in,cnot_out,depth_out,runtime_s,swaps";

#[derive(Parser, Debug)]
#[command(
    name = "tango",
    version,
    about = "Qubit mapping and routing for restricted-connectivity devices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Map one OpenQASM file onto a device.
    Map(MapArgs),
    /// Map every .qasm file in a directory and write a CSV summary.
    Bench(BenchArgs),
    /// Check a mapped circuit for legality and equivalence.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelectorArg {
    TwoStage,
    Distance,
}

#[derive(Args, Debug, Clone)]
pub struct TuningArgs {
    /// Device: q20, rochester or file:<path>.
    #[arg(short = 'a', long = "arch", default_value = "q20")]
    pub arch: String,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.99)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.001)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub reward: f64,
    /// Extended-layer weight.
    #[arg(long, default_value_t = 0.5)]
    pub w: f64,
    /// Extended-layer size.
    #[arg(long, default_value_t = 20)]
    pub window: usize,
    /// Leading gates whose qubits seed SWAP candidates (default: front layer).
    #[arg(long)]
    pub candidate_k: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub runs: usize,
    /// Tie-break seed; TANGO_SEED overrides it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = SelectorArg::TwoStage)]
    pub selector: SelectorArg,
    /// Skip SWAP-aware decomposition and gate cancellation.
    #[arg(long)]
    pub no_peephole: bool,
    /// Keep SWAP gates in the output (with --no-peephole).
    #[arg(long)]
    pub emit_swaps: bool,
}

#[derive(Args, Debug)]
pub struct MapArgs {
    #[command(flatten)]
    pub tuning: TuningArgs,
    #[arg(short = 'i', long = "input")]
    pub input: PathBuf,
    /// Mapped QASM (stdout if omitted).
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// JSON report.
    #[arg(short = 'r', long = "report")]
    pub report: Option<PathBuf>,
    /// Mapping file for `tango verify`.
    #[arg(short = 'm', long = "map")]
    pub map: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub tuning: TuningArgs,
    /// Directory of .qasm files.
    pub suite: PathBuf,
    /// CSV output (stdout if omitted).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(short = 'a', long = "arch", default_value = "q20")]
    pub arch: String,
    #[arg(long)]
    pub logical: PathBuf,
    #[arg(long)]
    pub physical: PathBuf,
    #[arg(long)]
    pub map: PathBuf,
}

impl TuningArgs {
    /// Pipeline settings, with the seed taken from `env_seed` when given.
    pub fn config(&self, env_seed: Option<&str>) -> Result<PipelineConfig, String> {
        let seed = match env_seed {
            Some(s) => s
                .trim()
                .parse()
                .map_err(|_| format!("{SEED_ENV} must be an unsigned integer, got `{s}`"))?,
            None => self.seed,
        };
        Ok(PipelineConfig {
            placement: PlacementConfig {
                alpha: self.alpha,
                beta: self.beta,
                gamma: self.gamma,
            },
            router: RouterConfig {
                delta: self.delta,
                reward: self.reward,
                w: self.w,
                window: self.window,
                candidate_k: self.candidate_k,
                runs: self.runs,
                seed,
                selector: match self.selector {
                    SelectorArg::TwoStage => SwapSelector::TwoStage,
                    SelectorArg::Distance => SwapSelector::DistanceOnly,
                },
                ..RouterConfig::default()
            },
            peephole: !self.no_peephole,
            emit_swaps: self.emit_swaps,
        })
    }
}

/// Settings echoed into the JSON report.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ConfigEcho {
    pub arch: String,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub reward: f64,
    pub w: f64,
    pub window: usize,
    pub candidate_k: Option<usize>,
    pub runs: usize,
    pub seed: u64,
    pub selector: &'static str,
    pub peephole: bool,
    pub emit_swaps: bool,
}

impl ConfigEcho {
    fn new(arch: &str, c: &PipelineConfig) -> Self {
        ConfigEcho {
            arch: arch.to_string(),
            alpha: c.placement.alpha,
            beta: c.placement.beta,
            gamma: c.placement.gamma,
            delta: c.router.delta,
            reward: c.router.reward,
            w: c.router.w,
            window: c.router.window,
            candidate_k: c.router.candidate_k,
            runs: c.router.runs,
            seed: c.router.seed,
            selector: match c.router.selector {
                SwapSelector::TwoStage => "two-stage",
                SwapSelector::DistanceOnly => "distance",
            },
            peephole: c.peephole,
            emit_swaps: c.emit_swaps,
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct CompileReport {
    pub schema: u32,
    pub benchmark: String,
    pub num_qubits: usize,
    pub cnot_in: usize,
    pub depth_in: usize,
    pub cnot_out: usize,
    pub depth_out: usize,
    pub runtime_s: f64,
    pub swaps_inserted: usize,
    pub pass_chosen: usize,
    pub run_chosen: usize,
    pub seed: u64,
    pub initial_mapping: Vec<usize>,
    pub final_mapping: Vec<usize>,
    pub config: ConfigEcho,
}

impl CompileReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{}",
            self.benchmark,
            self.num_qubits,
            self.cnot_in,
            self.depth_in,
            self.cnot_out,
            self.depth_out,
            self.runtime_s,
            self.swaps_inserted
        )
    }
}

/// Output of one compilation: report plus the emitted program.
pub struct Outcome {
    pub report: CompileReport,
    pub qasm: String,
    pub map: MapFile,
}

#[derive(Debug)]
pub enum CompileFailure {
    TooManyQubits(String),
    Other(String),
}

impl CompileFailure {
    fn message(&self) -> &str {
        match self {
            CompileFailure::TooManyQubits(m) | CompileFailure::Other(m) => m,
        }
    }
}

/// Compiles a parsed circuit. The timer covers the pipeline only.
pub fn compile(
    name: &str,
    circuit: &LogicalCircuit,
    graph: &CouplingGraph,
    arch: &str,
    config: &PipelineConfig,
) -> Result<Outcome, CompileFailure> {
    let start = Instant::now();
    let result = run_pipeline(circuit, graph, config);
    let elapsed = start.elapsed().as_secs_f64().max(1e-9);
    let Compiled {
        circuit: out,
        pass,
        run,
        ..
    } = result.map_err(|e| {
        if e.is_too_many_qubits() {
            CompileFailure::TooManyQubits(format!("{name}: {e}"))
        } else {
            CompileFailure::Other(format!("{name}: {e}"))
        }
    })?;
    // Counts come from the emitted program, not from router bookkeeping.
    let qasm = serialize_qasm(&out.to_circuit(), out.num_physical);
    let emitted = parse_qasm(&qasm).expect("emitted QASM parses");
    let map = MapFile {
        initial: out.initial_mapping.layout(),
        final_: out.final_mapping.layout(),
    };
    let report = CompileReport {
        schema: 1,
        benchmark: name.to_string(),
        num_qubits: circuit.num_qubits,
        cnot_in: circuit.cx_count(),
        depth_in: circuit.depth(),
        cnot_out: emitted.cx_count(),
        depth_out: emitted.depth(),
        runtime_s: elapsed,
        swaps_inserted: out.swaps_inserted,
        pass_chosen: pass,
        run_chosen: run,
        seed: config.router.seed,
        initial_mapping: map.initial.clone(),
        final_mapping: map.final_.clone(),
        config: ConfigEcho::new(arch, config),
    };
    Ok(Outcome { report, qasm, map })
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn load_circuit(path: &Path) -> Result<LogicalCircuit, String> {
    let text = read(path)?;
    parse_qasm(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn env_seed() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}

/// Writes to stdout; a closed pipe (`tango bench | head`) is not an error.
fn emit(text: &str) -> Result<(), String> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("cannot write to stdout: {e}")),
        _ => Ok(()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_map(args: &MapArgs) -> i32 {
    let run = || -> Result<(), (i32, String)> {
        let input = |m| (EXIT_INPUT, m);
        let config = args.tuning.config(env_seed().as_deref()).map_err(input)?;
        let graph = CouplingGraph::from_selector(&args.tuning.arch).map_err(|e| input(e.to_string()))?;
        let circuit = load_circuit(&args.input).map_err(input)?;
        let outcome =
            compile(&stem(&args.input), &circuit, &graph, &args.tuning.arch, &config).map_err(|f| match f {
                CompileFailure::TooManyQubits(m) => (EXIT_TOO_MANY_QUBITS, m),
                CompileFailure::Other(m) => (EXIT_INPUT, m),
            })?;
        match &args.output {
            Some(p) => write(p, &outcome.qasm).map_err(input)?,
            None => emit(&outcome.qasm).map_err(input)?,
        }
        if let Some(p) = &args.report {
            write(p, &to_json(&outcome.report)).map_err(input)?;
        }
        if let Some(p) = &args.map {
            write(p, &to_json(&outcome.map)).map_err(input)?;
        }
        log::info!(
            "{}: cx {} -> {}, depth {} -> {}",
            outcome.report.benchmark,
            outcome.report.cnot_in,
            outcome.report.cnot_out,
            outcome.report.depth_in,
            outcome.report.depth_out
        );
        Ok(())
    };
    match run() {
        Ok(()) => EXIT_OK,
        Err((code, message)) => {
            eprintln!("error: {message}");
            code
        }
    }
}

/// Renders the CSV for `reports`, sorted by benchmark name.
pub fn render_csv(reports: &[CompileReport]) -> String {
    let mut sorted: Vec<&CompileReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.benchmark.cmp(&b.benchmark));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

/// `.qasm` files directly inside `dir`, sorted by file name.
pub fn suite_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("cannot read {}: {e}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "qasm"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Compiles every file of a suite; failures come back as messages.
pub fn bench_reports(
    files: &[PathBuf],
    graph: &CouplingGraph,
    arch: &str,
    config: &PipelineConfig,
    jobs: Option<usize>,
) -> (Vec<CompileReport>, Vec<String>) {
    let work = || {
        files
            .par_iter()
            .map(|path| {
                let circuit = load_circuit(path)?;
                compile(&stem(path), &circuit, graph, arch, config)
                    .map(|o| o.report)
                    .map_err(|f| f.message().to_string())
            })
            .collect::<Vec<_>>()
    };
    let results = match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(report) => reports.push(report),
            Err(m) => failures.push(m),
        }
    }
    (reports, failures)
}

pub fn cmd_bench(args: &BenchArgs) -> i32 {
    let setup = || -> Result<_, String> {
        let config = args.tuning.config(env_seed().as_deref())?;
        let graph = CouplingGraph::from_selector(&args.tuning.arch).map_err(|e| e.to_string())?;
        let files = suite_files(&args.suite)?;
        if files.is_empty() {
            return Err(format!("no .qasm files in {}", args.suite.display()));
        }
        Ok((config, graph, files))
    };
    let (config, graph, files) = match setup() {
        Ok(v) => v,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let (reports, failures) = bench_reports(&files, &graph, &args.tuning.arch, &config, args.jobs);
    for f in &failures {
        log::error!("{f}");
        eprintln!("error: {f}");
    }
    let csv = render_csv(&reports);
    match &args.csv {
        Some(p) => {
            if let Err(m) = write(p, &csv) {
                eprintln!("error: {m}");
                return EXIT_INPUT;
            }
        }
        None => {
            if let Err(m) = emit(&csv) {
                eprintln!("error: {m}");
                return EXIT_INPUT;
            }
        }
    }
    if failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> i32 {
    let setup = || -> Result<_, String> {
        let graph = CouplingGraph::from_selector(&args.arch).map_err(|e| e.to_string())?;
        let logical = load_circuit(&args.logical)?;
        let physical = load_circuit(&args.physical)?;
        let map = MapFile::parse(&read(&args.map)?).map_err(|e| format!("{}: {e}", args.map.display()))?;
        let (initial, final_) = map
            .mappings(graph.num_physical())
            .map_err(|e| format!("{}: {e}", args.map.display()))?;
        if initial.num_logical() < logical.num_qubits {
            return Err(format!(
                "{}: maps {} qubits but the circuit has {}",
                args.map.display(),
                initial.num_logical(),
                logical.num_qubits
            ));
        }
        Ok((graph, logical, physical, initial, final_))
    };
    let (graph, logical, physical, initial, final_) = match setup() {
        Ok(v) => v,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_INPUT;
        }
    };
    let violations = check_connectivity(&physical.gates, &graph);
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        return EXIT_FAILED;
    }
    println!("connectivity: ok");
    if logical.num_qubits > MAX_UNITARY_QUBITS {
        println!("equivalence skipped (n>{MAX_UNITARY_QUBITS})");
        return EXIT_OK;
    }
    match equivalent(&logical, &physical.gates, &initial, &final_) {
        Ok(true) => {
            println!("equivalence: ok");
            EXIT_OK
        }
        Ok(false) => {
            println!("violation: mapped circuit is not equivalent to the logical circuit");
            EXIT_FAILED
        }
        Err(e) => {
            println!("equivalence skipped ({e})");
            EXIT_OK
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    match &cli.command {
        Command::Map(a) => cmd_map(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
    }
}
