use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qubo_dnc::community::{detect_multilevel, refine_boundary};
use qubo_dnc::exec::{self, configure_threads};
use qubo_dnc::generators::{random_erdos_renyi, random_regular};
use qubo_dnc::qaoa::{compare_reductions, diagonal_energies_with, optimize, MultistartConfig};
use qubo_dnc::reducer::{reduce_core_fixed, reduce_exact, QuenchConfig, ReductionMode};
use qubo_dnc::sat::{pubo_to_wcnf, run_external_solver, SolverConfig};
use qubo_dnc::solvers::{
    brute_force_min, classical_pipeline, pubo_pipeline, Backend, ExhaustiveSolver, PipelineConfig,
    PipelineReport, CSV_HEADER,
};
use qubo_dnc::{Exec, Graph, PuboPolynomial};

#[derive(Parser)]
#[command(name = "qubo-dnc", version, about = "Divide-and-conquer QUBO reduction experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Base random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// External weighted MaxSAT solver, e.g. "akmaxsat" or "solver --flag".
    #[arg(long, global = true)]
    solver_cmd: Option<String>,
    /// Resource caps as `boundary=N,qubits=N`.
    #[arg(long, global = true, default_value = "boundary=24,qubits=24")]
    caps: Caps,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug)]
struct Caps {
    boundary: usize,
    qubits: usize,
}

impl FromStr for Caps {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut caps = Caps {
            boundary: qubo_dnc::reducer::DEFAULT_MAX_BOUNDARY,
            qubits: qubo_dnc::qaoa::DEFAULT_MAX_QUBITS,
        };
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
            let value: usize = value.parse().map_err(|_| format!("bad number in {part:?}"))?;
            match key.trim() {
                "boundary" => caps.boundary = value,
                "qubits" => caps.qubits = value,
                other => return Err(format!("unknown cap {other:?} (use boundary or qubits)")),
            }
        }
        Ok(caps)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write random graphs as edge lists.
    Generate(GenerateArgs),
    /// Community and boundary statistics per graph.
    Stats(StatsArgs),
    /// Reduce an instance to its boundary-only polynomial.
    Reduce(ReduceArgs),
    /// Solve a PUBO exactly (oracle) or with the external MaxSAT solver.
    Solve(SolveArgs),
    /// Optimize QAOA parameters on an instance.
    Qaoa(QaoaArgs),
    /// Run the four-step pipeline on one graph.
    Pipeline(PipelineArgs),
    /// Step timings of the exact pipeline over a sweep of sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphKind {
    Regular,
    Erdos,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GraphKind,
    #[arg(long)]
    n: usize,
    /// Degree for regular graphs.
    #[arg(long)]
    k: Option<usize>,
    /// Edge probability for Erdos-Renyi graphs.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// Edge-list files.
    #[arg(required = true)]
    graphs: Vec<PathBuf>,
    /// Skip boundary refinement.
    #[arg(long)]
    no_refine: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    CoreFixed,
}

impl From<ModeArg> for ReductionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => ReductionMode::Exact,
            ModeArg::CoreFixed => ReductionMode::CoreFixed,
        }
    }
}

#[derive(Args)]
struct ReduceArgs {
    /// Edge list (MaxCut) or polynomial JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long)]
    no_refine: bool,
    /// Write the reduced instance JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the reduced instance as weighted MaxSAT.
    #[arg(long)]
    wcnf: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    /// Write the WCNF encoding here as well.
    #[arg(long)]
    wcnf: Option<PathBuf>,
    /// Seconds before the external solver is killed.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args, Clone)]
struct QaoaOpts {
    /// Circuit depth.
    #[arg(long = "p", default_value_t = 4)]
    depth: usize,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, default_value_t = 10)]
    starts: usize,
}

impl QaoaOpts {
    fn config(&self, seed: u64) -> MultistartConfig {
        MultistartConfig {
            depth: self.depth,
            starts: self.starts,
            budget: self.budget,
            seed,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct QaoaArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    opts: QaoaOpts,
    /// Reference minimum for the ratio (default: brute force of the input).
    #[arg(long, allow_hyphen_values = true)]
    e_min: Option<f64>,
    /// Per-evaluation trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Oracle,
    Wcnf,
    Qaoa,
}

#[derive(Args)]
struct PipelineArgs {
    /// Edge list (MaxCut) or polynomial JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "oracle")]
    backend: BackendArg,
    #[arg(long)]
    no_refine: bool,
    /// Brute-force the original instance for comparison.
    #[arg(long)]
    verify: bool,
    /// With the wcnf backend, fall back to the oracle if the solver fails.
    #[arg(long)]
    fallback: bool,
    #[command(flatten)]
    qaoa: QaoaOpts,
}

#[derive(Args)]
struct BenchArgs {
    /// Graph sizes to sweep.
    #[arg(long, value_delimiter = ',', default_value = "12,16,20,24")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    instances: usize,
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    configure_threads(cli.global.jobs);
    let g = &cli.global;
    match &cli.command {
        Command::Generate(a) => generate(g, a),
        Command::Stats(a) => stats(g, a),
        Command::Reduce(a) => reduce(g, a),
        Command::Solve(a) => solve(g, a),
        Command::Qaoa(a) => qaoa(g, a),
        Command::Pipeline(a) => pipeline(g, a),
        Command::Bench(a) => bench(g, a),
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Graph::read_edge_list(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

/// A `.json` file is a polynomial; anything else is an edge list read as MaxCut.
fn read_instance(path: &Path) -> Result<(PuboPolynomial, Option<Graph>)> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Ok((PuboPolynomial::from_json(&text)?, None))
    } else {
        let g = read_graph(path)?;
        Ok((g.maxcut_to_qubo(), Some(g)))
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(p) => std::fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn communities(graph: &Graph, refine: bool, seed: u64) -> qubo_dnc::community::CommunityAssignment {
    let ca = detect_multilevel(graph, seed);
    if refine {
        refine_boundary(graph, &ca, seed)
    } else {
        ca
    }
}

fn generate(g: &Global, a: &GenerateArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for i in 0..a.count {
        let seed = g.seed + i as u64;
        let (graph, name) = match a.kind {
            GraphKind::Regular => {
                let k = a.k.context("--k is required for regular graphs")?;
                (random_regular(a.n, k, seed)?, format!("regular_n{}_k{k}_s{seed}.txt", a.n))
            }
            GraphKind::Erdos => {
                let p = a.p.context("--p is required for Erdos-Renyi graphs")?;
                (random_erdos_renyi(a.n, p, seed)?, format!("erdos_n{}_p{p}_s{seed}.txt", a.n))
            }
        };
        let path = a.out.join(name);
        let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
        graph.write_edge_list(&mut w)?;
        w.flush()?;
        println!("{}", path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsRow {
    file: String,
    n: usize,
    num_communities: usize,
    mean_community_size: f64,
    b_baseline: usize,
    b_refined: Option<usize>,
    reduction_baseline: f64,
    reduction_refined: Option<f64>,
}

const STATS_HEADER: &str =
    "file,n,num_communities,mean_community_size,b_baseline,b_refined,reduction_baseline,reduction_refined";

fn stats(g: &Global, a: &StatsArgs) -> Result<()> {
    let seed = g.seed;
    let refine = !a.no_refine;
    let rows = exec::map_collect(Exec::Parallel, a.graphs.clone(), |path| -> Result<StatsRow> {
        let graph = read_graph(&path)?;
        let n = graph.num_vertices();
        let base = detect_multilevel(&graph, seed);
        let refined = refine.then(|| refine_boundary(&graph, &base, seed));
        let frac = |b: usize| if n == 0 { 0.0 } else { 1.0 - b as f64 / n as f64 };
        Ok(StatsRow {
            file: path.display().to_string(),
            n,
            num_communities: base.num_communities(),
            mean_community_size: n as f64 / base.num_communities().max(1) as f64,
            b_baseline: base.boundary_size(),
            b_refined: refined.as_ref().map(|r| r.boundary_size()),
            reduction_baseline: frac(base.boundary_size()),
            reduction_refined: refined.as_ref().map(|r| frac(r.boundary_size())),
        })
    });
    let rows: Vec<StatsRow> = rows.into_iter().collect::<Result<_>>()?;
    if g.format == Some(Format::Json) {
        return emit_json(&rows, None);
    }
    let opt = |v: Option<String>| v.unwrap_or_default();
    println!("{STATS_HEADER}");
    for r in rows {
        println!(
            "{},{},{},{:.4},{},{},{:.4},{}",
            r.file,
            r.n,
            r.num_communities,
            r.mean_community_size,
            r.b_baseline,
            opt(r.b_refined.map(|b| b.to_string())),
            r.reduction_baseline,
            opt(r.reduction_refined.map(|x| format!("{x:.4}"))),
        );
    }
    Ok(())
}

fn reduce(g: &Global, a: &ReduceArgs) -> Result<()> {
    let (poly, _) = read_instance(&a.input)?;
    let ca = communities(&poly.interaction_graph(), !a.no_refine, g.seed);
    let solver = ExhaustiveSolver::default();
    let quench = QuenchConfig { max_boundary: g.caps.boundary, ..Default::default() };
    let ri = match ReductionMode::from(a.mode) {
        ReductionMode::Exact => reduce_exact(&poly, &ca, &solver, &quench)?,
        ReductionMode::CoreFixed => reduce_core_fixed(&poly, &ca, &solver)?,
    };
    if let Some(path) = &a.wcnf {
        pubo_to_wcnf(&ri.poly)?.write_to_path(path)?;
    }
    emit_json(&ri.to_file(), a.out.as_deref())
}

#[derive(Serialize)]
struct SolveOutput {
    solver: String,
    energy: f64,
    assignment: Vec<i8>,
}

fn solve(g: &Global, a: &SolveArgs) -> Result<()> {
    let (poly, _) = read_instance(&a.input)?;
    if let Some(path) = &a.wcnf {
        pubo_to_wcnf(&poly)?.write_to_path(path)?;
    }
    let out = match &g.solver_cmd {
        Some(cmd) => {
            let mut cfg = SolverConfig::from_command_line(cmd)?;
            cfg.timeout_secs = a.timeout;
            let sol = run_external_solver(&pubo_to_wcnf(&poly)?, &poly, &cfg)?;
            SolveOutput {
                solver: cfg.program,
                energy: sol.energy,
                assignment: sol.assignment.values().to_vec(),
            }
        }
        None => {
            let (energy, s) = brute_force_min(&poly, Exec::Parallel)?;
            SolveOutput {
                solver: "oracle".into(),
                energy,
                assignment: s.values().to_vec(),
            }
        }
    };
    emit_json(&out, None)
}

#[derive(Serialize)]
struct QaoaOutput {
    best_ratio: f64,
    best_params: qubo_dnc::qaoa::QaoaParams,
    evals_used: usize,
    expectation: f64,
    e_min: f64,
}

fn qaoa(g: &Global, a: &QaoaArgs) -> Result<()> {
    let (poly, _) = read_instance(&a.input)?;
    let energies = diagonal_energies_with(&poly, g.caps.qubits, Exec::Parallel)?;
    let e_min = match a.e_min {
        Some(e) => e,
        None => energies.iter().copied().fold(f64::INFINITY, f64::min),
    };
    let cfg = MultistartConfig { record_trace: a.trace.is_some(), ..a.opts.config(g.seed) };
    let r = optimize(&energies, e_min, &cfg)?;
    if let Some(path) = &a.trace {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        writeln!(w, "start,eval,expectation")?;
        for t in &r.trace {
            writeln!(w, "{},{},{}", t.start, t.eval, t.expectation)?;
        }
        w.flush()?;
    }
    emit_json(
        &QaoaOutput {
            best_ratio: r.ratio,
            best_params: r.params,
            evals_used: r.evals_used,
            expectation: r.expectation,
            e_min,
        },
        None,
    )
}

fn pipeline(g: &Global, a: &PipelineArgs) -> Result<()> {
    let (poly, graph) = read_instance(&a.input)?;
    let quench = QuenchConfig { max_boundary: g.caps.boundary, ..Default::default() };
    if a.backend == BackendArg::Qaoa {
        let cmp = compare_reductions(
            &poly,
            !a.no_refine,
            g.seed,
            &quench,
            g.caps.qubits,
            &a.qaoa.config(g.seed),
        )?;
        if g.format == Some(Format::Csv) {
            println!("n,e_min,qubits_original,qubits_reduced,ratio_original,ratio_reduced_exact,ratio_reduced_core_fixed");
            println!(
                "{},{},{},{},{:.6},{:.6},{:.6}",
                cmp.n,
                cmp.e_min,
                cmp.original.qubits,
                cmp.reduced_exact.qubits,
                cmp.original.ratio,
                cmp.reduced_exact.ratio,
                cmp.reduced_core_fixed.ratio
            );
            return Ok(());
        }
        return emit_json(&cmp, None);
    }
    let backend = match a.backend {
        BackendArg::Wcnf => {
            let cmd = g.solver_cmd.as_deref().context("the wcnf backend needs --solver-cmd")?;
            Backend::External {
                solver: SolverConfig::from_command_line(cmd)?,
                fallback: a.fallback,
            }
        }
        _ => Backend::Oracle,
    };
    let cfg = PipelineConfig {
        mode: a.mode.into(),
        backend,
        refine: !a.no_refine,
        seed: g.seed,
        quench,
        exec: Exec::Parallel,
        verify_original: a.verify,
    };
    let report = match &graph {
        Some(gr) => classical_pipeline(gr, &cfg)?,
        None => pubo_pipeline(&poly, &cfg)?,
    };
    print_reports(g, std::slice::from_ref(&report))
}

fn print_reports(g: &Global, reports: &[PipelineReport]) -> Result<()> {
    match g.format {
        Some(Format::Csv) => {
            println!("{CSV_HEADER}");
            for r in reports {
                println!("{}", r.csv_row());
            }
            Ok(())
        }
        _ if reports.len() == 1 => emit_json(&reports[0], None),
        _ => emit_json(&reports, None),
    }
}

fn bench(g: &Global, a: &BenchArgs) -> Result<()> {
    if a.instances == 0 {
        bail!("--instances must be positive");
    }
    let mut reports = Vec::new();
    for &n in &a.sizes {
        for i in 0..a.instances {
            let seed = g.seed + i as u64;
            let graph = random_regular(n, a.k, seed)?;
            let cfg = PipelineConfig {
                mode: a.mode.into(),
                seed,
                quench: QuenchConfig { max_boundary: g.caps.boundary, ..Default::default() },
                ..Default::default()
            };
            reports.push(classical_pipeline(&graph, &cfg)?);
        }
    }
    let g = Global { format: Some(g.format.unwrap_or(Format::Csv)), ..g.clone() };
    print_reports(&g, &reports)
}
