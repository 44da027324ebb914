use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::WcnfInstance;
use crate::error::{Error, Result};
use crate::pubo::{PuboPolynomial, SpinAssignment};

/// How to invoke a MaxSAT solver. The instance path is appended as the last
/// argument.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    pub program: String,
    #[serde(default)]
    pub args: Vec<String>,
    #[serde(default)]
    pub timeout_secs: Option<f64>,
}

impl SolverConfig {
    /// Whitespace-separated command line, e.g. `"akmaxsat"` or `"solver --flag"`.
    pub fn from_command_line(cmd: &str) -> Result<Self> {
        let mut parts = cmd.split_whitespace().map(str::to_owned);
        let program = parts
            .next()
            .ok_or_else(|| Error::Parameter("empty solver command".into()))?;
        Ok(Self {
            program,
            args: parts.collect(),
            timeout_secs: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExternalSolution {
    /// Reported optimum: total weight of falsified clauses.
    pub cost: u64,
    pub satisfied_weight: u64,
    pub assignment: SpinAssignment,
    pub energy: f64,
}

/// Solve `poly` (already converted to `w`) with an external MaxSAT binary.
///
/// The solver must print `o <cost>` lines and the model on `v` lines, either
/// as signed literals or as a single 0/1 string. The last `o` line wins.
/// Variables missing from the model default to true (spin +1).
pub fn run_external_solver(
    w: &WcnfInstance,
    poly: &PuboPolynomial,
    cfg: &SolverConfig,
) -> Result<ExternalSolution> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("instance.wcnf");
    w.write_to_path(&path)?;
    let out_path = dir.path().join("stdout.txt");
    let stdout = std::fs::File::create(&out_path).map_err(|e| Error::io(out_path.clone(), e))?;

    let mut child = Command::new(&cfg.program)
        .args(&cfg.args)
        .arg(&path)
        .stdin(Stdio::null())
        .stdout(stdout)
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| Error::ExternalSolver {
            msg: format!("cannot start {:?}: {e}", cfg.program),
            output: String::new(),
        })?;

    let deadline = cfg
        .timeout_secs
        .map(|s| Instant::now() + Duration::from_secs_f64(s));
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        if deadline.is_some_and(|d| Instant::now() >= d) {
            let _ = child.kill();
            let _ = child.wait();
            return Err(Error::ExternalSolver {
                msg: format!("timed out after {:?} s", cfg.timeout_secs.unwrap_or_default()),
                output: std::fs::read_to_string(&out_path).unwrap_or_default(),
            });
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let output = std::fs::read_to_string(&out_path).map_err(|e| Error::io(out_path, e))?;
    // MaxSAT competition solvers exit with 10/20/30 on success.
    if !(status.success() || matches!(status.code(), Some(10 | 20 | 30))) {
        return Err(Error::ExternalSolver {
            msg: format!("solver exited with {status}"),
            output,
        });
    }
    decode_output(w, poly, &output)
}

pub(crate) fn decode_output(
    w: &WcnfInstance,
    poly: &PuboPolynomial,
    output: &str,
) -> Result<ExternalSolution> {
    let fail = |msg: &str| Error::ExternalSolver {
        msg: msg.to_owned(),
        output: output.to_owned(),
    };
    let mut cost = None;
    let mut x: Vec<Option<bool>> = vec![None; w.num_vars];
    let mut saw_model = false;
    for line in output.lines() {
        let t = line.trim();
        if let Some(rest) = t.strip_prefix("o ") {
            cost = Some(rest.trim().parse::<u64>().map_err(|_| fail("bad `o` line"))?);
        } else if let Some(rest) = t.strip_prefix('v') {
            saw_model = true;
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            let bitstring = tokens.len() == 1
                && w.num_vars > 1
                && tokens[0].len() == w.num_vars
                && tokens[0].bytes().all(|b| b == b'0' || b == b'1');
            if bitstring {
                for (i, b) in tokens[0].bytes().enumerate() {
                    x[i] = Some(b == b'1');
                }
                continue;
            }
            for tok in tokens {
                let lit: i64 = tok.parse().map_err(|_| fail("bad literal on `v` line"))?;
                if lit == 0 {
                    continue;
                }
                let idx = (lit.unsigned_abs() - 1) as usize;
                if idx >= w.num_vars {
                    return Err(fail("literal out of range on `v` line"));
                }
                x[idx] = Some(lit > 0);
            }
        }
    }
    let cost = cost.ok_or_else(|| fail("no `o` line in solver output"))?;
    if !saw_model && w.num_vars > 0 {
        return Err(fail("no `v` line in solver output"));
    }
    let x: Vec<bool> = x.into_iter().map(|v| v.unwrap_or(true)).collect();
    let total = w.total_weight();
    if cost > total {
        return Err(fail("reported cost exceeds total clause weight"));
    }
    let declared = w.energy_from_satisfied(total - cost);
    let spins = SpinAssignment::new(x.iter().map(|&b| if b { 1 } else { -1 }).collect())?;
    let energy = poly.evaluate(&spins)?;
    if (declared - energy).abs() > 1e-6 * energy.abs().max(1.0) {
        return Err(Error::Integrity(format!(
            "solver declared energy {declared} but its model evaluates to {energy}"
        )));
    }
    Ok(ExternalSolution {
        cost,
        satisfied_weight: w.satisfied_weight(&x),
        assignment: spins,
        energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::sat::pubo_to_wcnf;

    fn edge() -> (PuboPolynomial, WcnfInstance) {
        let p = Graph::new(2, [(0, 1)]).unwrap().maxcut_to_qubo();
        let w = pubo_to_wcnf(&p).unwrap();
        (p, w)
    }

    #[test]
    fn decodes_literal_and_bitstring_models() {
        let (p, w) = edge();
        let sol = decode_output(&w, &p, "c hello\no 0\ns OPTIMUM FOUND\nv 1 -2 0\n").unwrap();
        assert_eq!(sol.energy, -1.0);
        assert_eq!(sol.assignment.values(), &[1, -1]);
        let sol = decode_output(&w, &p, "o 0\nv 01\n").unwrap();
        assert_eq!(sol.assignment.values(), &[-1, 1]);
    }

    #[test]
    fn last_cost_line_wins() {
        let (p, w) = edge();
        let sol = decode_output(&w, &p, "o 2\nv 1 2\no 0\nv 1 -2\n").unwrap();
        assert_eq!(sol.cost, 0);
    }

    #[test]
    fn lying_solver_is_an_integrity_error() {
        let (p, w) = edge();
        let err = decode_output(&w, &p, "o 0\nv 1 2\n").unwrap_err();
        assert!(matches!(err, Error::Integrity(_)));
    }

    #[test]
    fn missing_lines_are_solver_errors() {
        let (p, w) = edge();
        assert!(matches!(
            decode_output(&w, &p, "v 1 -2\n"),
            Err(Error::ExternalSolver { .. })
        ));
        assert!(matches!(
            decode_output(&w, &p, "o 0\n"),
            Err(Error::ExternalSolver { .. })
        ));
    }

    #[test]
    fn missing_binary_is_solver_error() {
        let (p, w) = edge();
        let cfg = SolverConfig::from_command_line("/nonexistent/maxsat-solver").unwrap();
        assert!(matches!(
            run_external_solver(&w, &p, &cfg),
            Err(Error::ExternalSolver { .. })
        ));
    }
}
