use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::exhaustive::{brute_force_min, ExhaustiveSolver};
use crate::community::{detect_multilevel, refine_boundary, score_g};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::Graph;
use crate::pubo::{PuboPolynomial, SpinAssignment};
use crate::reducer::{
    assemble_core_fixed, assemble_exact, fix_cores, lift_solution, quench_all, split_energy,
    QuenchConfig, ReducedInstance, ReductionMode,
};
use crate::sat::{pubo_to_wcnf, run_external_solver, SolverConfig};

/// Solver for the reduced instance.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Backend {
    /// Exhaustive enumeration.
    #[default]
    Oracle,
    /// Weighted MaxSAT binary; with `fallback` a solver failure drops back
    /// to the oracle instead of failing the run.
    External { solver: SolverConfig, fallback: bool },
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub mode: ReductionMode,
    pub backend: Backend,
    pub refine: bool,
    pub seed: u64,
    pub quench: QuenchConfig,
    pub exec: Exec,
    /// Also brute-force the original instance (only sensible for small n).
    pub verify_original: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            mode: ReductionMode::Exact,
            backend: Backend::Oracle,
            refine: true,
            seed: 0,
            quench: QuenchConfig::default(),
            exec: Exec::Parallel,
            verify_original: false,
        }
    }
}

/// Wall-clock seconds per step: (1) community detection and refinement,
/// (2) energy split plus quench or core fixing, (3) assembly, (4) reduced solve and lift. `total` is their sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepTimings {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
    pub total: f64,
}

impl StepTimings {
    pub fn fractions(&self) -> [f64; 4] {
        let total = self.total.max(f64::MIN_POSITIVE);
        [self.t1, self.t2, self.t3, self.t4].map(|t| t / total)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub n: usize,
    pub m: usize,
    pub k: Option<usize>,
    pub seed: u64,
    pub mode: ReductionMode,
    pub backend: String,
    pub num_communities: usize,
    pub community_sizes: Vec<usize>,
    pub boundary_size: usize,
    pub g: usize,
    pub reduced_vars: usize,
    pub reduced_terms: usize,
    pub reduced_degree_histogram: BTreeMap<usize, usize>,
    pub timings: StepTimings,
    pub step_fractions: [f64; 4],
    pub e_min_reduced: f64,
    pub e_lifted: f64,
    pub e_min_original: Option<f64>,
    pub lifted_assignment: SpinAssignment,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fallback_reason: Option<String>,
}

pub const CSV_HEADER: &str =
    "n,k,seed,mode,num_communities,B,g,t1,t2,t3,t4,e_min_original,e_min_reduced";

impl PipelineReport {
    pub fn csv_header() -> &'static str {
        CSV_HEADER
    }

    pub fn csv_row(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{},{}",
            self.n,
            opt(self.k.map(|k| k.to_string())),
            self.seed,
            self.mode,
            self.num_communities,
            self.boundary_size,
            self.g,
            self.timings.t1,
            self.timings.t2,
            self.timings.t3,
            self.timings.t4,
            opt(self.e_min_original.map(|e| e.to_string())),
            self.e_min_reduced,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Fraction of spins removed by the reduction.
    pub fn reduction(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            1.0 - self.reduced_vars as f64 / self.n as f64
        }
    }
}

/// MaxCut on `g` through the four reduction steps.
pub fn classical_pipeline(g: &Graph, cfg: &PipelineConfig) -> Result<PipelineReport> {
    let mut report = pubo_pipeline(&g.maxcut_to_qubo(), cfg)?;
    report.m = g.num_edges();
    report.k = g.regular_degree();
    Ok(report)
}

/// Any quadratic PUBO through the four reduction steps. Communities are
/// detected on the interaction graph.
pub fn pubo_pipeline(poly: &PuboPolynomial, cfg: &PipelineConfig) -> Result<PipelineReport> {
    let graph = poly.interaction_graph();
    let t = Instant::now();
    let mut ca = detect_multilevel(&graph, cfg.seed);
    if cfg.refine {
        ca = refine_boundary(&graph, &ca, cfg.seed);
    }
    let t1 = t.elapsed().as_secs_f64();

    let solver = ExhaustiveSolver::with_exec(Exec::Sequential);
    let t = Instant::now();
    let split = split_energy(poly, &ca).map_err(Error::at_step("2"))?;
    let (ri, t2, t3) = match cfg.mode {
        ReductionMode::Exact => {
            let tables = quench_all(&split, &solver, &cfg.quench).map_err(Error::at_step("2"))?;
            let t2 = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let ri = assemble_exact(split, tables).map_err(Error::at_step("3"))?;
            (ri, t2, t.elapsed().as_secs_f64())
        }
        ReductionMode::CoreFixed => {
            let cores = fix_cores(&split, &solver).map_err(Error::at_step("2"))?;
            let t2 = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let ri = assemble_core_fixed(split, cores).map_err(Error::at_step("3"))?;
            (ri, t2, t.elapsed().as_secs_f64())
        }
    };
    finish(poly, cfg, &graph, &ca, ri, [t1, t2, t3])
}

fn finish(
    poly: &PuboPolynomial,
    cfg: &PipelineConfig,
    graph: &Graph,
    ca: &crate::community::CommunityAssignment,
    ri: ReducedInstance,
    [t1, t2, t3]: [f64; 3],
) -> Result<PipelineReport> {
    let t = Instant::now();
    let (e_min_reduced, b, backend, fallback_reason) =
        solve_reduced(&ri.poly, cfg).map_err(Error::at_step("4"))?;
    let lifted = lift_solution(&ri, &b).map_err(Error::at_step("4"))?;
    let e_lifted = poly.evaluate(&lifted)?;
    let t4 = t.elapsed().as_secs_f64();

    let e_min_original = if cfg.verify_original {
        Some(brute_force_min(poly, cfg.exec)?.0)
    } else {
        None
    };
    let timings = StepTimings {
        t1,
        t2,
        t3,
        t4,
        total: t1 + t2 + t3 + t4,
    };
    Ok(PipelineReport {
        n: poly.num_vars(),
        m: poly.terms().filter(|(v, _)| v.len() == 2).count(),
        k: graph.regular_degree(),
        seed: cfg.seed,
        mode: ri.mode,
        backend,
        num_communities: ca.num_communities(),
        community_sizes: ca.community_sizes(),
        boundary_size: ca.boundary_size(),
        g: score_g(graph, ca),
        reduced_vars: ri.num_vars(),
        reduced_terms: ri.poly.num_terms(),
        reduced_degree_histogram: ri.poly.degree_histogram(),
        step_fractions: timings.fractions(),
        timings,
        e_min_reduced,
        e_lifted,
        e_min_original,
        lifted_assignment: lifted,
        fallback_reason,
    })
}

type Solved = (f64, SpinAssignment, String, Option<String>);

fn solve_reduced(poly: &PuboPolynomial, cfg: &PipelineConfig) -> Result<Solved> {
    let oracle = |poly: &PuboPolynomial| brute_force_min(poly, cfg.exec);
    match &cfg.backend {
        Backend::Oracle => {
            let (e, b) = oracle(poly)?;
            Ok((e, b, "oracle".into(), None))
        }
        Backend::External { solver, fallback } => {
            let attempt = pubo_to_wcnf(poly).and_then(|w| run_external_solver(&w, poly, solver));
            match attempt {
                Ok(sol) => Ok((sol.energy, sol.assignment, solver.program.clone(), None)),
                Err(e) if *fallback => {
                    let (en, b) = oracle(poly)?;
                    Ok((en, b, "oracle".into(), Some(e.to_string())))
                }
                Err(e) => Err(e),
            }
        }
    }
}
