//! Drives the external MaxSAT adapter with shell-script stand-ins.
#![cfg(unix)]

use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};

use qubo_dnc::generators::random_regular;
use qubo_dnc::sat::{pubo_to_wcnf, run_external_solver, SolverConfig, WcnfInstance};
use qubo_dnc::solvers::{brute_force_min, classical_pipeline, Backend, PipelineConfig};
use qubo_dnc::{Error, Exec, PuboPolynomial, SpinAssignment};

fn script(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path
}

/// Solver output for the optimum of `p`, as a correct solver would print it.
fn optimal_output(p: &PuboPolynomial, w: &WcnfInstance) -> String {
    let (_, s) = brute_force_min(p, Exec::Sequential).unwrap();
    let x: Vec<bool> = s.values().iter().map(|&v| v == 1).collect();
    let cost = w.total_weight() - w.satisfied_weight(&x);
    let lits: Vec<String> = x
        .iter()
        .enumerate()
        .map(|(i, &b)| if b { format!("{}", i + 1) } else { format!("-{}", i + 1) })
        .collect();
    format!("c mock\no {}\no {cost}\ns OPTIMUM FOUND\nv {} 0\n", cost + 2, lits.join(" "))
}

fn config(path: &Path) -> SolverConfig {
    SolverConfig {
        program: path.to_string_lossy().into_owned(),
        args: Vec::new(),
        timeout_secs: Some(10.0),
    }
}

#[test]
fn canned_optimum_is_decoded_and_verified() {
    let dir = tempfile::tempdir().unwrap();
    let p = random_regular(10, 3, 4).unwrap().maxcut_to_qubo();
    let w = pubo_to_wcnf(&p).unwrap();
    let answer = dir.path().join("answer.txt");
    std::fs::write(&answer, optimal_output(&p, &w)).unwrap();
    // The script checks it was handed a WCNF file before answering.
    let solver = script(
        dir.path(),
        "solver.sh",
        &format!("grep -q '^p wcnf 10 ' \"$1\" || exit 3\ncat {}\nexit 30", answer.display()),
    );
    let sol = run_external_solver(&w, &p, &config(&solver)).unwrap();
    let (e_min, _) = brute_force_min(&p, Exec::Sequential).unwrap();
    assert_eq!(sol.energy, e_min);
    assert_eq!(w.energy_from_satisfied(sol.satisfied_weight), e_min);
}

#[test]
fn solver_that_lies_about_its_cost_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let p = random_regular(8, 3, 1).unwrap().maxcut_to_qubo();
    let w = pubo_to_wcnf(&p).unwrap();
    let all_true = (1..=8).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    let solver = script(dir.path(), "liar.sh", &format!("echo 'o 0'\necho 'v {all_true}'"));
    let err = run_external_solver(&w, &p, &config(&solver)).unwrap_err();
    assert!(matches!(err, Error::Integrity(_)), "{err}");
}

#[test]
fn failing_and_hanging_solvers_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = random_regular(8, 3, 1).unwrap().maxcut_to_qubo();
    let w = pubo_to_wcnf(&p).unwrap();
    let crash = script(dir.path(), "crash.sh", "echo 'c oops'\nexit 1");
    assert!(matches!(
        run_external_solver(&w, &p, &config(&crash)),
        Err(Error::ExternalSolver { .. })
    ));
    let hang = script(dir.path(), "hang.sh", "exec sleep 30");
    let cfg = SolverConfig { timeout_secs: Some(0.2), ..config(&hang) };
    let start = std::time::Instant::now();
    let err = run_external_solver(&w, &p, &cfg).unwrap_err();
    assert!(err.to_string().contains("timed out"), "{err}");
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn pipeline_uses_the_external_backend() {
    let dir = tempfile::tempdir().unwrap();
    let g = random_regular(14, 3, 6).unwrap();
    // First pass with the oracle tells us the reduced optimum to hand back.
    let oracle = classical_pipeline(&g, &PipelineConfig { seed: 6, ..Default::default() }).unwrap();

    let ca = {
        use qubo_dnc::community::{detect_multilevel, refine_boundary};
        let ig = g.maxcut_to_qubo().interaction_graph();
        refine_boundary(&ig, &detect_multilevel(&ig, 6), 6)
    };
    let ri = qubo_dnc::reducer::reduce_exact(
        &g.maxcut_to_qubo(),
        &ca,
        &qubo_dnc::solvers::ExhaustiveSolver::default(),
        &Default::default(),
    )
    .unwrap();
    let w = pubo_to_wcnf(&ri.poly).unwrap();
    let answer = dir.path().join("answer.txt");
    std::fs::write(&answer, optimal_output(&ri.poly, &w)).unwrap();
    let solver = script(dir.path(), "solver.sh", &format!("cat {}", answer.display()));

    let cfg = PipelineConfig {
        seed: 6,
        backend: Backend::External { solver: config(&solver), fallback: false },
        verify_original: true,
        ..Default::default()
    };
    let r = classical_pipeline(&g, &cfg).unwrap();
    assert!(r.fallback_reason.is_none());
    assert_eq!(r.e_min_reduced, oracle.e_min_reduced);
    assert_eq!(Some(r.e_lifted), r.e_min_original);
    let lifted = SpinAssignment::new(r.lifted_assignment.values().to_vec()).unwrap();
    assert_eq!(g.maxcut_to_qubo().evaluate(&lifted).unwrap(), r.e_lifted);
}
