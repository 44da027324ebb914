//! Seeded random graph generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

const MAX_PAIRING_ATTEMPTS: usize = 100_000;

/// Uniform-ish random simple `k`-regular graph on `n` vertices.
///
/// Configuration model: `n*k` stubs are shuffled and paired; a pairing with a
/// self-loop or a repeated edge is discarded and the process restarts.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if !(n * k).is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "no {k}-regular graph on {n} vertices: n*k must be even"
        )));
    }
    if k > 0 && k >= n {
        return Err(Error::Parameter(format!(
            "degree {k} must be smaller than vertex count {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    let mut edges = Vec::with_capacity(n * k / 2);
    let mut seen = std::collections::HashSet::with_capacity(n * k / 2);

    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        stubs.shuffle(&mut rng);
        edges.clear();
        seen.clear();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return Graph::new(n, edges.iter().copied());
    }
    Err(Error::Parameter(format!(
        "failed to sample a simple {k}-regular graph on {n} vertices after {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

/// G(n, p): every pair appears independently with probability `p`.
pub fn random_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_the_only_cubic_graph_on_four_vertices() {
        let g = random_regular(4, 3, 7).unwrap();
        assert_eq!(g.num_edges(), 6);
        for u in 0..4 {
            for v in u + 1..4 {
                assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn cubic_twenty_has_degree_three_everywhere() {
        let g = random_regular(20, 3, 11).unwrap();
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(g.num_edges(), 30);
    }

    #[test]
    fn odd_handshake_is_rejected() {
        assert!(matches!(random_regular(5, 3, 0), Err(Error::Parameter(_))));
        assert!(matches!(random_regular(3, 3, 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn zero_regular_is_empty() {
        assert_eq!(random_regular(6, 0, 1).unwrap().num_edges(), 0);
    }

    #[test]
    fn regular_is_deterministic_per_seed() {
        assert_eq!(random_regular(30, 4, 5).unwrap(), random_regular(30, 4, 5).unwrap());
        assert_ne!(random_regular(30, 4, 5).unwrap(), random_regular(30, 4, 6).unwrap());
    }

    #[test]
    fn erdos_extremes() {
        assert_eq!(random_erdos_renyi(10, 0.0, 3).unwrap().num_edges(), 0);
        assert_eq!(random_erdos_renyi(10, 1.0, 3).unwrap().num_edges(), 45);
        assert!(random_erdos_renyi(10, 1.5, 3).is_err());
        assert!(random_erdos_renyi(10, -0.1, 3).is_err());
    }

    #[test]
    fn erdos_mean_edge_count_is_binomial() {
        // 40 vertices, p = 0.3: 780 pairs, mean 234, per-graph sd sqrt(780*0.3*0.7).
        let seeds = 200u64;
        let total: usize = (0..seeds)
            .map(|s| random_erdos_renyi(40, 0.3, s).unwrap().num_edges())
            .sum();
        let mean = total as f64 / seeds as f64;
        let sd_of_mean = (780.0f64 * 0.3 * 0.7).sqrt() / (seeds as f64).sqrt();
        assert!((mean - 234.0).abs() < 3.0 * sd_of_mean, "mean {mean}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn regular_graphs_are_simple_and_regular(n in 4usize..60, k in 1usize..5, seed in any::<u64>()) {
                prop_assume!(k < n && (n * k) % 2 == 0);
                let g = random_regular(n, k, seed).unwrap();
                prop_assert_eq!(g.regular_degree(), Some(k));
                prop_assert_eq!(g.num_edges(), n * k / 2);
                prop_assert_eq!(&g, &random_regular(n, k, seed).unwrap());
            }
        }
    }
}
