//! Mean qubit reduction `1 - |B|/n` on random graph ensembles.

use qubo_dnc::community::{detect_multilevel, refine_boundary};
use qubo_dnc::generators::{random_erdos_renyi, random_regular};

fn main() {
    for (label, n, k) in [("3-reg", 60, 3), ("3-reg", 100, 3), ("4-reg", 60, 4), ("4-reg", 100, 4)] {
        let (mut base, mut refd, mut nc) = (0.0, 0.0, 0.0);
        for seed in 0..100u64 {
            let g = random_regular(n, k, seed).unwrap();
            let ca = detect_multilevel(&g, seed);
            let r = refine_boundary(&g, &ca, seed);
            base += 1.0 - ca.boundary_size() as f64 / n as f64;
            refd += 1.0 - r.boundary_size() as f64 / n as f64;
            nc += ca.num_communities() as f64;
        }
        println!("{label} n={n}: communities {:.2} baseline {:.3} refined {:.3}", nc / 100.0, base / 100.0, refd / 100.0);
    }
    for n in [20, 40, 60] {
        let (mut base, mut refd) = (0.0, 0.0);
        for seed in 0..100u64 {
            let g = random_erdos_renyi(n, 0.3, seed).unwrap();
            let ca = detect_multilevel(&g, seed);
            let r = refine_boundary(&g, &ca, seed);
            base += 1.0 - ca.boundary_size() as f64 / n as f64;
            refd += 1.0 - r.boundary_size() as f64 / n as f64;
        }
        println!("ER n={n}: baseline {:.3} refined {:.3}", base / 100.0, refd / 100.0);
    }
}
