//! Mean QAOA approximation ratio on original vs reduced 3-regular MaxCut.

use std::time::Instant;

use qubo_dnc::community::{detect_multilevel, refine_boundary};
use qubo_dnc::generators::random_regular;
use qubo_dnc::qaoa::{diagonal_energies, optimize, MultistartConfig};
use qubo_dnc::reducer::{reduce_core_fixed, reduce_exact, QuenchConfig};
use qubo_dnc::solvers::{brute_force_min, ExhaustiveSolver};
use qubo_dnc::Exec;

fn main() -> qubo_dnc::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let instances = args.first().copied().unwrap_or(10);
    let budget = args.get(1).copied().unwrap_or(10_000);
    let starts = args.get(2).copied().unwrap_or(10);
    let mut sums = [0.0; 3];
    for i in 0..instances {
        let n = if i % 2 == 0 { 12 } else { 14 };
        let seed = i as u64;
        let g = random_regular(n, 3, seed)?;
        let poly = g.maxcut_to_qubo();
        let (e_min, _) = brute_force_min(&poly, Exec::Parallel)?;
        let ca = refine_boundary(&g, &detect_multilevel(&g, seed), seed);
        let solver = ExhaustiveSolver::default();
        let exact = reduce_exact(&poly, &ca, &solver, &QuenchConfig::default())?;
        let fixed = reduce_core_fixed(&poly, &ca, &solver)?;
        let cfg = MultistartConfig { depth: 4, starts, budget, seed, ..Default::default() };
        let t = Instant::now();
        let mut row = [0.0; 3];
        for (k, p) in [&poly, &exact.poly, &fixed.poly].into_iter().enumerate() {
            let r = optimize(&diagonal_energies(p)?, e_min, &cfg)?;
            row[k] = r.ratio;
            sums[k] += r.ratio;
        }
        println!(
            "n={n} seed={seed} |B|={} ratios {:.4} {:.4} {:.4} ({:.1}s)",
            exact.num_vars(),
            row[0],
            row[1],
            row[2],
            t.elapsed().as_secs_f64()
        );
    }
    let m = instances as f64;
    println!("mean original {:.4} exact {:.4} core-fixed {:.4}", sums[0] / m, sums[1] / m, sums[2] / m);
    Ok(())
}
