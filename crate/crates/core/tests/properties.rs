use conefix_core::classes::{build_constraints, certify_constraints, fit_min_ab, sample_pairs};
use conefix_core::cone_space::{
    cone_contains, estimate_normal_constant, order_leq, order_ll, Cone, EVector, NormSpec,
};
use conefix_core::mappings::{corpus, find};
use conefix_core::solver::{check_rate_bound, picard_solve};
use conefix_core::{Certificate64, FitResult64};
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 3)
}

fn ev(v: &[f64]) -> EVector<f64> {
    EVector::from_f64(v).unwrap()
}

fn norms() -> Vec<NormSpec<f64>> {
    vec![
        NormSpec::Sup,
        NormSpec::Euclidean,
        NormSpec::finite_difference(3, 0.0, 1.0),
    ]
}

proptest! {
    #[test]
    fn order_is_reflexive(x in vec3()) {
        let cone = Cone::orthant(3);
        prop_assert!(order_leq(&cone, &ev(&x), &ev(&x)).unwrap());
        prop_assert!(!order_ll(&cone, &ev(&x), &ev(&x)).unwrap());
    }

    #[test]
    fn order_is_antisymmetric(x in vec3(), y in vec3()) {
        let cone = Cone::orthant(3);
        let (x, y) = (ev(&x), ev(&y));
        if order_leq(&cone, &x, &y).unwrap() && order_leq(&cone, &y, &x).unwrap() {
            prop_assert!(x.sub(&y).unwrap().max_abs() <= 1e-9);
        }
    }

    #[test]
    fn order_is_transitive(x in vec3(), d1 in prop::collection::vec(0.0f64..5.0, 3),
                           d2 in prop::collection::vec(0.0f64..5.0, 3)) {
        let cone = Cone::orthant(3);
        let x = ev(&x);
        let y = x.add(&ev(&d1)).unwrap();
        let z = y.add(&ev(&d2)).unwrap();
        prop_assert!(order_leq(&cone, &x, &y).unwrap());
        prop_assert!(order_leq(&cone, &y, &z).unwrap());
        prop_assert!(order_leq(&cone, &x, &z).unwrap());
    }

    #[test]
    fn strict_order_implies_order(x in vec3(), y in vec3()) {
        let cone = Cone::orthant(3);
        let (x, y) = (ev(&x), ev(&y));
        if order_ll(&cone, &x, &y).unwrap() {
            prop_assert!(order_leq(&cone, &x, &y).unwrap());
        }
    }

    #[test]
    fn cone_closed_under_nonnegative_combinations(
        p in prop::collection::vec(0.0f64..10.0, 3),
        q in prop::collection::vec(0.0f64..10.0, 3),
        s in 0.0f64..10.0, t in 0.0f64..10.0,
    ) {
        let cone = Cone::orthant(3);
        let v = ev(&p).combine(s, &ev(&q), t).unwrap();
        prop_assert!(cone_contains(&cone, &v).unwrap());
        let neg = v.scale(-1.0);
        if v.max_abs() > 1e-9 {
            prop_assert!(!cone_contains(&cone, &neg).unwrap());
        }
    }

    #[test]
    fn norm_axioms(x in vec3(), y in vec3(), s in -5.0f64..5.0) {
        for norm in norms() {
            let (xv, yv) = (ev(&x), ev(&y));
            let nx = norm.norm(&xv);
            prop_assert!(nx >= 0.0);
            let scale = norm.norm(&xv.scale(s));
            prop_assert!((scale - s.abs() * nx).abs() <= 1e-9 * nx.max(1.0));
            let sum = norm.norm(&xv.add(&yv).unwrap());
            prop_assert!(sum <= nx + norm.norm(&yv) + 1e-9);
        }
    }

    #[test]
    fn normal_constant_never_decreases(n in 1usize..4, k in 1usize..200, seed in 0u64..1000) {
        let cone = Cone::<f64>::orthant(n);
        for norm in [NormSpec::Sup, NormSpec::Euclidean, NormSpec::finite_difference(n, 0.0, 1.0)] {
            let small = estimate_normal_constant(&cone, &norm, k, seed);
            let large = estimate_normal_constant(&cone, &norm, 2 * k, seed);
            prop_assert!(small >= 1.0);
            prop_assert!(large >= small);
        }
    }

    #[test]
    fn certify_monotone_in_constants(a in 0.0f64..1.5, b in 0.0f64..1.5,
                                     da in 0.0f64..0.5, db in 0.0f64..0.5,
                                     idx in 0usize..6) {
        let entry = &corpus::<f64>()[idx];
        let constraints = build_constraints(&entry.pair, 200, 7).unwrap();
        let base = certify_constraints(&constraints, a, b, 7).unwrap();
        let larger = certify_constraints(&constraints, a + da, b + db, 7).unwrap();
        prop_assert!(larger.worst_residual <= base.worst_residual + 1e-15);
        if base.is_satisfied() {
            prop_assert!(larger.is_satisfied());
        }
    }

    #[test]
    fn sample_pairs_are_prefix_stable(n in 1usize..300, extra in 0usize..300, seed in 0u64..100) {
        let short = sample_pairs(0.0f64, 1.0, n, seed);
        let long = sample_pairs(0.0f64, 1.0, n + extra, seed);
        prop_assert_eq!(&long[..short.len()], &short[..]);
        prop_assert!(short.iter().all(|&(x, y)| x != y && (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)));
    }

    #[test]
    fn picard_traces_meet_rate_bound(x0 in 0.5f64..=1.0) {
        let e2 = find::<f64>("E2").unwrap();
        let result = picard_solve(&e2.pair, 0.5, 0.0, x0, 1e-10, 200).unwrap();
        prop_assert!(result.converged());
        if result.trace.steps() >= 2 {
            prop_assert!(check_rate_bound(&result.trace).unwrap().passed);
        }
        prop_assert!((result.point - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn fit_and_certificate_round_trip_through_json() {
    for label in ["E1", "E2", "C-Kannan"] {
        let entry = find::<f64>(label).unwrap();
        let fit = fit_min_ab(&entry.pair, 500, 3).unwrap();
        let text = serde_json::to_string(&fit).unwrap();
        let back: FitResult64 = serde_json::from_str(&text).unwrap();
        assert_eq!(back, fit);

        let cert = conefix_core::classes::certify(&entry.pair, 0.5, 0.2, 500, 3).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate64 = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
    }
}

#[test]
fn fits_are_deterministic_per_seed() {
    for entry in corpus::<f64>() {
        let first = fit_min_ab(&entry.pair, 1000, 11).unwrap();
        let second = fit_min_ab(&entry.pair, 1000, 11).unwrap();
        assert_eq!(first, second, "{}", entry.label());
    }
}
