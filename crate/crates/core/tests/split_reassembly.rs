use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qubo_dnc::community::{detect_multilevel, refine_boundary, CommunityAssignment};
use qubo_dnc::generators::random_regular;
use qubo_dnc::reducer::split_energy;
use qubo_dnc::{PuboPolynomial, SpinAssignment};

/// A QUBO on a random 3-regular interaction graph with random weights and
/// linear terms.
fn weighted_qubo(n: usize, seed: u64) -> PuboPolynomial {
    let g = random_regular(n, 3, seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = PuboPolynomial::constant(n, rng.gen_range(-2.0..2.0));
    for &(u, v) in g.edges() {
        p.add_term(&[u, v], rng.gen_range(-2.0..2.0)).unwrap();
    }
    for i in 0..n {
        if rng.gen_bool(0.5) {
            p.add_term(&[i], rng.gen_range(-1.0..1.0)).unwrap();
        }
    }
    p
}

fn local_assignment(global: &[i8], boundary: &[usize], core: &[usize]) -> SpinAssignment {
    SpinAssignment::new(boundary.iter().chain(core).map(|&v| global[v]).collect()).unwrap()
}

#[test]
fn parts_sum_to_the_original_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for seed in 0..10u64 {
        let n = 30;
        let p = weighted_qubo(n, seed);
        let g = p.interaction_graph();
        let ca = refine_boundary(&g, &detect_multilevel(&g, seed), seed);
        let split = split_energy(&p, &ca).unwrap();
        for _ in 0..10 {
            let spins: Vec<i8> = (0..n).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
            let s = SpinAssignment::new(spins.clone()).unwrap();
            let mut total = split.across.evaluate(&s).unwrap();
            for sub in &split.subinstances {
                let local = local_assignment(&spins, &sub.boundary_vars, &sub.core_vars);
                total += sub.intra_poly.evaluate(&local).unwrap();
            }
            assert!((total - p.evaluate(&s).unwrap()).abs() < 1e-9);
        }
    }
}

#[test]
fn every_term_lands_in_exactly_one_bucket() {
    let p = weighted_qubo(24, 5);
    let g = p.interaction_graph();
    let ca = detect_multilevel(&g, 5);
    let split = split_energy(&p, &ca).unwrap();
    let mut count = split.across.num_terms();
    for sub in &split.subinstances {
        count += sub.intra_poly.num_terms();
        // Boundary spins are exactly the members with an outside neighbour.
        assert_eq!(sub.boundary_vars, ca.boundary_of(sub.community));
        assert_eq!(sub.core_vars, ca.core_of(sub.community));
    }
    assert_eq!(count, p.num_terms());
    for (vars, _) in split.across.terms() {
        assert!(vars.len() != 1);
        if vars.len() == 2 {
            assert_ne!(ca.community_of(vars[0]), ca.community_of(vars[1]));
        }
    }
}

#[test]
fn single_community_leaves_only_the_constant_across() {
    let p = weighted_qubo(12, 1);
    let g = p.interaction_graph();
    let split = split_energy(&p, &CommunityAssignment::single(&g)).unwrap();
    assert_eq!(split.subinstances.len(), 1);
    assert!(split.boundary.is_empty());
    assert_eq!(split.across.num_terms(), usize::from(p.constant_term() != 0.0));
    assert_eq!(split.subinstances[0].intra_poly.num_terms() + split.across.num_terms(), p.num_terms());
}
