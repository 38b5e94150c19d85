//! Property-based invariants over randomized inputs, seeded and shrinkable.

use proptest::prelude::*;

use schur_certify::certification::{dirichlet_bound_check, soundness_bound_qubit, trace_identity_check};
use schur_certify::characters::char_jacobi_trudi;
use schur_certify::partitions::{dim_irrep, enumerate_partitions, Partition};
use schur_certify::scalar::wrap_phase;
use schur_certify::tomography::{plan_queries_tomography, risk_closed_form};
use schur_certify::unitary::{distance, eigenphases, haar_random, EigenPhases};
use num_traits::ToPrimitive;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_phase_invariant(seed in 0u64..1000, theta in 0.0f64..std::f64::consts::TAU) {
        let u = haar_random::<f64>(3, seed);
        let v = haar_random::<f64>(3, seed.wrapping_add(7919));
        let base = distance(&u, &v).unwrap();
        let rotated = distance(&u.phased(theta), &v).unwrap();
        prop_assert!((base - rotated).abs() < 1e-12);
        // complement identity: dist² + |tr(U†V)/d|² = 1
        let inner = u.inner(&v).unwrap().norm() / 3.0;
        prop_assert!((base * base + inner * inner - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_is_deterministic_and_unitary(seed in 0u64..10_000, d in 1usize..6) {
        let a = haar_random::<f64>(d, seed);
        let b = haar_random::<f64>(d, seed);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.unitarity_residual() <= 1e-12);
    }

    #[test]
    fn eigenphases_reconstruct_haar(seed in 0u64..500, d in 1usize..6) {
        let u = haar_random::<f64>(d, seed);
        let e = eigenphases(&u).unwrap();
        for w in e.phases().windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for &p in e.phases() {
            prop_assert!((0.0..std::f64::consts::TAU).contains(&p));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_valid(n in 0u64..10, d in 1usize..5) {
        let parts = enumerate_partitions(n, d);
        prop_assert!(!parts.is_empty());
        for lambda in &parts {
            prop_assert_eq!(lambda.n(), n);
            prop_assert!(lambda.parts().len() <= d);
        }
        for pair in parts.windows(2) {
            // lexicographically strictly decreasing
            prop_assert!(pair[0].parts() > pair[1].parts());
        }
    }

    #[test]
    fn character_modulus_within_dimension(seed in 0u64..200, n in 1u64..5) {
        let u = haar_random::<f64>(3, seed);
        let e = eigenphases(&u).unwrap();
        for lambda in enumerate_partitions(n, 3) {
            let c = char_jacobi_trudi(&lambda, &e).unwrap();
            let dim = dim_irrep(&lambda).to_f64().unwrap();
            prop_assert!(c.value.norm() <= dim + 1e-6);
        }
    }

    #[test]
    fn trace_identity_residual_vanishes(phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 1..7)) {
        let e = EigenPhases::from_phases(&phases);
        prop_assert!(trace_identity_check(&e).abs() <= 1e-10);
    }

    #[test]
    fn wrap_phase_lands_in_range(x in -1e6f64..1e6) {
        let w = wrap_phase(x);
        prop_assert!((0.0..std::f64::consts::TAU).contains(&w));
        // congruent mod 2π
        let k = ((x - w) / std::f64::consts::TAU).round();
        prop_assert!((x - w - k * std::f64::consts::TAU).abs() <= 1e-6 * x.abs().max(1.0));
    }

    #[test]
    fn dirichlet_bound_holds_for_odd_s(k in 0u64..50, x in -std::f64::consts::PI..std::f64::consts::PI) {
        let s = 2 * k + 1;
        prop_assert!(dirichlet_bound_check(s, x).unwrap());
    }

    #[test]
    fn qubit_bound_is_monotone(n in 2u64..200, eps in 0.01f64..1.0) {
        let b = soundness_bound_qubit(n, eps);
        prop_assert!(b > 0.0);
        prop_assert!(soundness_bound_qubit(n + 1, eps) < b);
    }

    #[test]
    fn risk_planner_meets_target(d in 2u64..6, eps in 1e-4f64..0.5) {
        let n = plan_queries_tomography(d, eps).unwrap();
        prop_assert!(risk_closed_form::<f64>(n, d).unwrap() <= eps);
        if n > 1 {
            prop_assert!(risk_closed_form::<f64>(n - 1, d).unwrap() > eps);
        }
    }

    #[test]
    fn partition_rejects_bad_input(a in 0u64..5, b in 0u64..5) {
        prop_assume!(a < b);
        prop_assert!(Partition::new(&[a, b], 2).is_err());
    }
}
