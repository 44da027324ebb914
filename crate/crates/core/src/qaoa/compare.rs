use serde::{Deserialize, Serialize};

use super::{diagonal_energies_with, optimize, MultistartConfig, QaoaParams};
use crate::community::{detect_multilevel, refine_boundary};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::pubo::PuboPolynomial;
use crate::reducer::{reduce_core_fixed, reduce_exact, QuenchConfig};
use crate::solvers::{brute_force_min, ExhaustiveSolver};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CaseResult {
    pub qubits: usize,
    pub ratio: f64,
    pub expectation: f64,
    pub evals_used: usize,
    pub params: QaoaParams,
}

/// QAOA on the original instance and on both reductions, all scored against
/// the original minimum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QaoaComparison {
    pub n: usize,
    pub e_min: f64,
    pub original: CaseResult,
    pub reduced_exact: CaseResult,
    pub reduced_core_fixed: CaseResult,
}

pub fn compare_reductions(
    poly: &PuboPolynomial,
    refine: bool,
    seed: u64,
    quench: &QuenchConfig,
    max_qubits: usize,
    cfg: &MultistartConfig,
) -> Result<QaoaComparison> {
    let (e_min, _) = brute_force_min(poly, Exec::Parallel)?;
    if e_min == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let graph = poly.interaction_graph();
    let mut ca = detect_multilevel(&graph, seed);
    if refine {
        ca = refine_boundary(&graph, &ca, seed);
    }
    let solver = ExhaustiveSolver::default();
    let exact = reduce_exact(poly, &ca, &solver, quench)?;
    let fixed = reduce_core_fixed(poly, &ca, &solver)?;
    let run = |p: &PuboPolynomial| -> Result<CaseResult> {
        let energies = diagonal_energies_with(p, max_qubits, cfg.exec)?;
        let r = optimize(&energies, e_min, cfg)?;
        Ok(CaseResult {
            qubits: p.num_vars(),
            ratio: r.ratio,
            expectation: r.expectation,
            evals_used: r.evals_used,
            params: r.params,
        })
    };
    Ok(QaoaComparison {
        n: poly.num_vars(),
        e_min,
        original: run(poly)?,
        reduced_exact: run(&exact.poly)?,
        reduced_core_fixed: run(&fixed.poly)?,
    })
}
