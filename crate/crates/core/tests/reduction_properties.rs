use proptest::prelude::*;

use qubo_dnc::community::{detect_multilevel, refine_boundary};
use qubo_dnc::reducer::{
    lift_solution, reduce_core_fixed, reduce_exact, QuenchConfig, ReducedFile, ReductionMode,
};
use qubo_dnc::solvers::{brute_force_min, ExhaustiveSolver};
use qubo_dnc::{Exec, PuboPolynomial, SpinAssignment};

/// Sparse QUBO with half-integer couplings and integer linear terms.
fn qubo() -> impl Strategy<Value = PuboPolynomial> {
    (6usize..=14).prop_flat_map(|n| {
        let edges = proptest::collection::vec((0..n, 0..n, -4i32..=4), n..3 * n);
        let fields = proptest::collection::vec(-2i32..=2, n);
        (Just(n), edges, fields).prop_map(|(n, edges, fields)| {
            let mut p = PuboPolynomial::new(n);
            for (u, v, w) in edges {
                if u != v {
                    p.add_term(&[u, v], w as f64 / 2.0).unwrap();
                }
            }
            for (i, h) in fields.into_iter().enumerate() {
                p.add_term(&[i], h as f64).unwrap();
            }
            p
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_reduction_keeps_the_ground_energy(p in qubo(), seed in 0u64..1000) {
        let g = p.interaction_graph();
        let ca = refine_boundary(&g, &detect_multilevel(&g, seed), seed);
        let solver = ExhaustiveSolver::default();
        let ri = reduce_exact(&p, &ca, &solver, &QuenchConfig::default()).unwrap();
        let (orig, _) = brute_force_min(&p, Exec::Sequential).unwrap();
        let (red, b) = brute_force_min(&ri.poly, Exec::Sequential).unwrap();
        prop_assert!((orig - red).abs() < 1e-9);
        let lifted = lift_solution(&ri, &b).unwrap();
        prop_assert!((p.evaluate(&lifted).unwrap() - orig).abs() < 1e-9);
        prop_assert!(ri.poly.degree() <= ri.num_vars().max(2));
    }

    #[test]
    fn exact_reduction_is_pointwise_quench_plus_across(p in qubo(), seed in 0u64..1000, mask in any::<u64>()) {
        let g = p.interaction_graph();
        let ca = detect_multilevel(&g, seed);
        let ri = reduce_exact(&p, &ca, &ExhaustiveSolver::default(), &QuenchConfig::default()).unwrap();
        let nb = ri.num_vars();
        let b = SpinAssignment::from_mask(if nb == 64 { mask } else { mask & ((1u64 << nb) - 1) }, nb);
        let lifted = lift_solution(&ri, &b).unwrap();
        let e = ri.poly.evaluate(&b).unwrap();
        prop_assert!((e - ri.table_energy(&b).unwrap()).abs() < 1e-9);
        prop_assert!((e - p.evaluate(&lifted).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn core_fixed_is_a_quadratic_upper_bound(p in qubo(), seed in 0u64..1000) {
        let g = p.interaction_graph();
        let ca = refine_boundary(&g, &detect_multilevel(&g, seed), seed);
        let ri = reduce_core_fixed(&p, &ca, &ExhaustiveSolver::default()).unwrap();
        prop_assert_eq!(ri.mode, ReductionMode::CoreFixed);
        prop_assert!(ri.poly.degree() <= 2);
        let (orig, _) = brute_force_min(&p, Exec::Sequential).unwrap();
        let (red, b) = brute_force_min(&ri.poly, Exec::Sequential).unwrap();
        prop_assert!(red >= orig - 1e-9);
        let lifted = lift_solution(&ri, &b).unwrap();
        let e = p.evaluate(&lifted).unwrap();
        prop_assert!(e <= red + 1e-9);
        prop_assert!(e >= orig - 1e-9);
    }
}

#[test]
fn reduced_file_round_trips_through_json() {
    let g = qubo_dnc::generators::random_regular(16, 3, 2).unwrap();
    let p = g.maxcut_to_qubo();
    let ca = detect_multilevel(&g, 2);
    let ri = reduce_exact(&p, &ca, &ExhaustiveSolver::default(), &QuenchConfig::default()).unwrap();
    let text = ri.to_json().unwrap();
    let file: ReducedFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file.var_map, ri.boundary());
    assert_eq!(file.mode, ReductionMode::Exact);
    assert_eq!(file.num_original_vars, 16);
    assert_eq!(file.polynomial().unwrap(), ri.poly);
}
