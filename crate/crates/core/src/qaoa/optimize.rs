use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{approximation_ratio, QaoaParams, Simulator};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};

/// Derivative-free simplex minimizer.
#[derive(Clone, Copy, Debug)]
pub struct NelderMead {
    pub max_evals: usize,
    /// Stop once the simplex values differ by less than this.
    pub ftol: f64,
    /// Stop once every vertex is within this distance of the best one.
    pub xtol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evals: 1000,
            ftol: 1e-12,
            xtol: 1e-9,
        }
    }
}

impl NelderMead {
    /// Minimize `f` from `x0` with initial edge lengths `steps`.
    /// Returns the best point, its value and the number of evaluations.
    pub fn minimize<F>(&self, mut f: F, x0: &[f64], steps: &[f64]) -> (Vec<f64>, f64, usize)
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = x0.len();
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            f(x)
        };
        if self.max_evals == 0 {
            return (x0.to_vec(), f64::INFINITY, 0);
        }
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let f0 = eval(x0, &mut evals);
        simplex.push((x0.to_vec(), f0));
        for i in 0..n {
            if evals >= self.max_evals {
                break;
            }
            let mut x = x0.to_vec();
            x[i] += steps[i];
            let fx = eval(&x, &mut evals);
            simplex.push((x, fx));
        }
        if simplex.len() < n + 1 {
            return best_of(simplex, evals);
        }

        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (fb, fw) = (simplex[0].1, simplex[n].1);
            let spread = simplex
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if (fw - fb).abs() <= self.ftol && spread <= self.xtol {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(1.0);
            let fr = eval(&xr, &mut evals);
            if fr < simplex[0].1 {
                if evals >= self.max_evals {
                    simplex[n] = (xr, fr);
                    break;
                }
                let xe = along(2.0);
                let fe = eval(&xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            if evals >= self.max_evals {
                break;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (xc, fc);
                continue;
            }
            // Shrink towards the best vertex.
            let best = simplex[0].0.clone();
            for (x, fx) in simplex.iter_mut().skip(1) {
                if evals >= self.max_evals {
                    break;
                }
                for (xi, bi) in x.iter_mut().zip(&best) {
                    *xi = bi + 0.5 * (*xi - bi);
                }
                *fx = eval(x, &mut evals);
            }
        }
        best_of(simplex, evals)
    }
}

fn best_of(simplex: Vec<(Vec<f64>, f64)>, evals: usize) -> (Vec<f64>, f64, usize) {
    let (x, fx) = simplex
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("simplex has at least one vertex");
    (x, fx, evals)
}

#[derive(Clone, Debug)]
pub struct MultistartConfig {
    pub depth: usize,
    pub starts: usize,
    /// Total circuit evaluations, split evenly across starts.
    pub budget: usize,
    pub seed: u64,
    pub exec: Exec,
    /// Used as the first starting points (padded to `depth`) before random ones.
    pub initial: Vec<QaoaParams>,
    pub record_trace: bool,
}

impl Default for MultistartConfig {
    fn default() -> Self {
        Self {
            depth: 1,
            starts: 10,
            budget: 10_000,
            seed: 0,
            exec: Exec::Parallel,
            initial: Vec::new(),
            record_trace: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub start: usize,
    pub eval: usize,
    pub expectation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub params: QaoaParams,
    pub expectation: f64,
    /// `expectation / e_min` against the reference minimum passed in.
    pub ratio: f64,
    pub evals_used: usize,
    pub best_start: usize,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trace: Vec<TraceEntry>,
}

struct StartOutcome {
    x: Vec<f64>,
    value: f64,
    evals: usize,
    trace: Vec<TraceEntry>,
}

/// Multistart Nelder–Mead over `(gamma, beta)` minimizing the expectation of
/// the diagonal cost `energies`. The approximation ratio is reported against
/// `e_min`, which need not be the minimum of `energies` itself.
pub fn optimize(energies: &[f64], e_min: f64, cfg: &MultistartConfig) -> Result<OptimizeResult> {
    if cfg.depth == 0 {
        return Err(Error::Parameter("QAOA depth must be at least 1".into()));
    }
    if cfg.starts == 0 || cfg.budget < cfg.starts {
        return Err(Error::Parameter(format!(
            "budget {} cannot cover {} starts",
            cfg.budget, cfg.starts
        )));
    }
    if e_min == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let sim = Simulator::new(energies.to_vec())?;
    let dim = 2 * cfg.depth;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<(usize, Vec<f64>, usize)> = Vec::with_capacity(cfg.starts);
    for s in 0..cfg.starts {
        let x0 = match cfg.initial.get(s) {
            Some(p) => p.padded(cfg.depth).to_flat()[..dim].to_vec(),
            None => (0..dim)
                .map(|i| {
                    let range = if i % 2 == 0 { 2.0 * PI } else { PI };
                    rng.gen::<f64>() * range
                })
                .collect(),
        };
        let share = cfg.budget / cfg.starts + usize::from(s < cfg.budget % cfg.starts);
        starts.push((s, x0, share));
    }
    let steps: Vec<f64> = (0..dim).map(|i| if i % 2 == 0 { 0.4 } else { 0.2 }).collect();

    let outcomes = exec::map_collect(cfg.exec, starts, |(s, x0, share)| {
        let mut sim = sim.clone();
        let mut trace = Vec::new();
        let nm = NelderMead {
            max_evals: share,
            ..NelderMead::default()
        };
        let (x, value, evals) = nm.minimize(
            |x| {
                let v = sim.expectation(&QaoaParams::from_flat(x));
                if cfg.record_trace {
                    trace.push(TraceEntry {
                        start: s,
                        eval: trace.len(),
                        expectation: v,
                    });
                }
                v
            },
            &x0,
            &steps,
        );
        StartOutcome {
            x,
            value,
            evals,
            trace,
        }
    });

    let evals_used = outcomes.iter().map(|o| o.evals).sum();
    let (best_start, best) = outcomes
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value))
        .expect("at least one start");
    let params = QaoaParams::from_flat(&best.x);
    let expectation = best.value;
    let trace = outcomes.iter().flat_map(|o| o.trace.iter().cloned()).collect();
    Ok(OptimizeResult {
        ratio: approximation_ratio(expectation, e_min)?,
        params,
        expectation,
        evals_used,
        best_start,
        trace,
    })
}
