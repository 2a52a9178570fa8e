//! Independent oracles checked against the library's answers.

use conefix_core::classes::lp::{minimize_a_plus_2b, HalfPlane, LpSolution};
use conefix_core::classes::{build_constraints, certify, fit_constraints, PairConstraint};
use conefix_core::cone_space::{
    check_metric_axioms, estimate_normal_constant, Cone, ConeMetricSpace, EVector, NormSpec,
    PointDomain,
};
use conefix_core::mappings::{corpus, find};
use proptest::prelude::*;
use std::sync::Arc;

const SAMPLES: usize = 2000;
const SEED: u64 = 42;

/// Flattened `(A_i, B_i, L_i)` coordinates of every constraint.
fn flat_rows(constraints: &[PairConstraint<f64>]) -> Vec<(f64, f64, f64)> {
    constraints
        .iter()
        .flat_map(|c| {
            (0..c.image_gap.dim()).map(move |i| (c.base_gap[i], c.displacement[i], c.image_gap[i]))
        })
        .collect()
}

fn grid_feasible(rows: &[(f64, f64, f64)], a: f64, b: f64) -> bool {
    rows.iter()
        .all(|&(ca, cb, l)| l - a * ca - b * cb <= 1e-9 * l.abs().max(1.0))
}

/// Least `a + 2b` over the grid `(a, b) ∈ {0, 1e-3, …, 2}²` of feasible points.
/// For each `a` the smallest feasible grid `b` is located by bisection over
/// grid indices, which is exact because feasibility is monotone in `b`.
fn grid_oracle(rows: &[(f64, f64, f64)]) -> Option<f64> {
    const N: usize = 2000;
    let step = 2.0 / N as f64;
    let mut best: Option<f64> = None;
    for i in 0..=N {
        let a = i as f64 * step;
        if !grid_feasible(rows, a, 2.0) {
            continue;
        }
        let (mut lo, mut hi) = (0usize, N);
        if grid_feasible(rows, a, 0.0) {
            hi = 0;
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if grid_feasible(rows, a, mid as f64 * step) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let obj = a + 2.0 * hi as f64 * step;
        best = Some(best.map_or(obj, |b: f64| b.min(obj)));
    }
    best
}

#[test]
fn fit_agrees_with_grid_oracle_on_corpus() {
    for entry in corpus::<f64>() {
        let constraints = build_constraints(&entry.pair, SAMPLES, SEED).unwrap();
        let fit = fit_constraints(&constraints, SEED);
        let oracle = grid_oracle(&flat_rows(&constraints));
        let objective = fit.objective.expect("corpus fits are feasible");
        match oracle {
            Some(o) => assert!(
                (objective - o).abs() <= 2e-3,
                "{}: lp {objective} vs grid {o}",
                entry.label()
            ),
            // nothing on [0,2]^2 works: the LP optimum must lie outside it
            None => assert!(objective > 2.0, "{}", entry.label()),
        }
    }
}

#[test]
fn fitted_objectives_match_expectations() {
    for entry in corpus::<f64>() {
        let constraints = build_constraints(&entry.pair, SAMPLES, SEED).unwrap();
        let fit = fit_constraints(&constraints, SEED);
        if let Some(expected) = entry.expected.min_a_plus_2b {
            assert!(
                (fit.objective.unwrap() - expected).abs() <= 1e-6,
                "{}: {:?}",
                entry.label(),
                fit.objective
            );
        }
    }
    let e1 = find::<f64>("E1").unwrap();
    let fit = conefix_core::classes::fit_min_ab(&e1.pair, SAMPLES, SEED).unwrap();
    assert!(fit.objective.unwrap() >= 1.0);
}

#[test]
fn fitted_argmin_survives_fresh_tenfold_sample() {
    for label in ["E2", "E3", "C-Banach"] {
        let entry = find::<f64>(label).unwrap();
        let fit = conefix_core::classes::fit_min_ab(&entry.pair, SAMPLES, SEED).unwrap();
        let (a, b) = fit.argmin.unwrap();
        let cert = certify(&entry.pair, a, b, 10 * SAMPLES, SEED + 1).unwrap();
        assert!(cert.is_satisfied(), "{label}: {}", cert.worst_residual);
        assert!(cert.worst_residual <= 1e-6);
    }
}

#[test]
fn scaled_sqrt_violated_on_whole_subcritical_grid() {
    let e1 = find::<f64>("E1").unwrap();
    let constraints = build_constraints(&e1.pair, SAMPLES, SEED).unwrap();
    for i in 0..20 {
        for j in 0..20 {
            let (a, b) = (i as f64 * 0.05, j as f64 * 0.05);
            if a + 2.0 * b >= 1.0 {
                continue;
            }
            let cert =
                conefix_core::classes::certify_constraints(&constraints, a, b, SEED).unwrap();
            assert!(!cert.is_satisfied(), "({a}, {b})");
        }
    }
}

/// Residual of the class inequality at `(0, 0.01)` for `S = √x`, `T = 2x`,
/// written out by hand per unit `e^t` coordinate.
#[test]
fn scaled_sqrt_witness_residual_by_hand() {
    let (x, y, alpha) = (0.0f64, 0.01f64, 2.0f64);
    let l = (alpha * x.sqrt() - alpha * y.sqrt()).abs();
    let a_gap = (alpha * x - alpha * y).abs();
    let b_gap = (alpha * x - alpha * x.sqrt()).abs() + (alpha * y - alpha * y.sqrt()).abs();
    let by_hand = l - 0.5 * a_gap - 0.2 * b_gap;
    assert!((by_hand - 0.154).abs() < 1e-12);

    let e1 = find::<f64>("E1").unwrap();
    let c = conefix_core::classes::pair_constraint(&e1.pair, x, y).unwrap();
    let raw = c.raw_residual(0.5, 0.2);
    let weights = conefix_core::cone_space::exp_grid_weights::<f64>(8);
    for (r, w) in raw.iter().zip(weights) {
        assert!((r / w - by_hand).abs() < 1e-9);
    }
}

#[test]
fn log_sqrt_halving_identity_on_samples() {
    let e2 = find::<f64>("E2").unwrap();
    let grid = PointDomain::interval(0.5, 1.0).grid(1000);
    for &x in grid.iter().step_by(7) {
        for &y in &grid {
            let lhs = (e2.pair.apply_s(x).unwrap().ln() - e2.pair.apply_s(y).unwrap().ln()).abs();
            let rhs = 0.5 * (x.ln() - y.ln()).abs();
            assert!((lhs - rhs).abs() <= 1e-12);
        }
    }
}

#[test]
fn corpus_maps_close_on_their_domains() {
    for entry in corpus::<f64>() {
        for x in entry.pair.domain().grid(1000) {
            entry.pair.apply_s(x).unwrap();
            entry.pair.apply_t(x).unwrap();
        }
    }
}

#[test]
fn corpus_t_maps_separate_distinct_points() {
    for entry in corpus::<f64>() {
        let grid = entry.pair.domain().grid(200);
        let mut min_ratio = f64::INFINITY;
        for w in grid.windows(2) {
            let (x, y) = (w[0], w[1]);
            let t_gap = entry
                .pair
                .space
                .distance_norm(
                    entry.pair.apply_t(x).unwrap(),
                    entry.pair.apply_t(y).unwrap(),
                )
                .unwrap();
            let gap = entry.pair.space.distance_norm(x, y).unwrap();
            min_ratio = min_ratio.min(t_gap / gap);
        }
        assert!(min_ratio > 0.0, "{}", entry.label());
    }
}

/// Brute force over grid triples of `[0, 2]` for `d(x, y) = |x - y|²`.
#[test]
fn squared_metric_triangle_witness_matches_brute_force() {
    let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.25).collect();
    let sq = |x: f64, y: f64| (x - y) * (x - y);
    let mut worst = (0.0, [0.0; 3]);
    for &x in &grid {
        for &y in &grid {
            for &z in &grid {
                let v = sq(x, y) - sq(x, z) - sq(y, z);
                if v > worst.0 {
                    worst = (v, [x, y, z]);
                }
            }
        }
    }
    assert_eq!(worst, (2.0, [0.0, 2.0, 1.0]));

    let space = ConeMetricSpace::new(
        "squared",
        PointDomain::interval(0.0, 2.0),
        Cone::orthant(1),
        NormSpec::Sup,
        Arc::new(move |x: f64, y: f64| EVector::new(vec![sq(x, y)]).unwrap()),
    );
    let report = check_metric_axioms(&space, 1000, SEED).unwrap();
    assert!(report.positivity.holds && report.symmetry.holds);
    assert!(!report.triangle.holds);
    assert_eq!(report.triangle.witness, vec![0.0, 2.0, 1.0]);
    assert!((report.triangle.worst_violation - worst.0).abs() < 1e-12);
}

#[test]
fn planar_and_exp_metrics_satisfy_axioms() {
    let planar = ConeMetricSpace::planar("planar", PointDomain::interval(-3.0, 3.0), 2.0);
    assert!(check_metric_axioms(&planar, 1000, SEED).unwrap().all_hold());
    let exp = ConeMetricSpace::<f64>::exp_weighted("exp", PointDomain::interval(0.0, 1.0), 8);
    assert!(check_metric_axioms(&exp, 1000, SEED).unwrap().all_hold());
}

#[test]
fn signed_difference_fails_positivity_with_ordered_witness() {
    let space = ConeMetricSpace::new(
        "signed",
        PointDomain::interval(0.0, 1.0),
        Cone::orthant(1),
        NormSpec::Sup,
        Arc::new(|x: f64, y: f64| EVector::new(vec![x - y]).unwrap()),
    );
    let report = check_metric_axioms(&space, 1000, SEED).unwrap();
    assert!(!report.positivity.holds);
    assert!(report.positivity.witness[0] < report.positivity.witness[1]);
}

/// Dense-grid maximum of `‖x‖ / ‖y‖` over `0 ≤ x ≤ y` on `{0, 1/4, …, 1}³`
/// for the three-point finite-difference norm.
#[test]
fn weighted_normal_constant_matches_dense_grid() {
    let norm = NormSpec::finite_difference(3, 0.0, 1.0);
    let levels: Vec<f64> = (0..=4).map(|i| i as f64 * 0.25).collect();
    let mut oracle: f64 = 1.0;
    let mut points = Vec::new();
    for &p in &levels {
        for &q in &levels {
            for &r in &levels {
                points.push([p, q, r]);
            }
        }
    }
    for y in &points {
        let ny = norm.norm(&EVector::from_f64(y).unwrap());
        if ny == 0.0 {
            continue;
        }
        for x in &points {
            if x.iter().zip(y).all(|(a, b)| a <= b) {
                oracle = oracle.max(norm.norm(&EVector::from_f64(x).unwrap()) / ny);
            }
        }
    }
    assert_eq!(oracle, 3.0);

    let cone = Cone::<f64>::orthant(3);
    let estimate = estimate_normal_constant(&cone, &norm, 1000, SEED);
    assert!(estimate >= 1.0);
    assert!((estimate - oracle).abs() < 1e-12);
}

/// Every pairwise line intersection and axis crossing, filtered for
/// feasibility: the textbook vertex enumeration.
fn naive_lp(rows: &[(f64, f64, f64)]) -> Option<f64> {
    let feasible = |a: f64, b: f64| {
        a >= -1e-12
            && b >= -1e-12
            && rows
                .iter()
                .all(|&(ca, cb, l)| ca * a + cb * b >= l - 1e-9 * l.abs().max(1.0))
    };
    let mut lines: Vec<(f64, f64, f64)> = rows.to_vec();
    lines.push((1.0, 0.0, 0.0));
    lines.push((0.0, 1.0, 0.0));
    let mut best: Option<f64> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = lines[i];
            let (a2, b2, c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-12 {
                continue;
            }
            let a = (c1 * b2 - c2 * b1) / det;
            let b = (a1 * c2 - a2 * c1) / det;
            if feasible(a, b) {
                let obj = a.max(0.0) + 2.0 * b.max(0.0);
                best = Some(best.map_or(obj, |o: f64| o.min(obj)));
            }
        }
    }
    best
}

fn row_strategy() -> impl Strategy<Value = (f64, f64, f64)> {
    (
        prop_oneof![Just(0.0), 0.05f64..1.0],
        prop_oneof![Just(0.0), 0.05f64..1.0],
        0.0f64..1.0,
    )
        .prop_filter("row must be satisfiable", |&(a, b, _)| a > 0.0 || b > 0.0)
}

proptest! {
    #[test]
    fn envelope_lp_matches_naive_enumeration(rows in prop::collection::vec(row_strategy(), 1..12)) {
        let planes: Vec<HalfPlane<f64>> = rows
            .iter()
            .enumerate()
            .map(|(source, &(a_coef, b_coef, rhs))| HalfPlane { a_coef, b_coef, rhs, source })
            .collect();
        let naive = naive_lp(&rows).expect("bounded-below LP with satisfiable rows has a vertex");
        match minimize_a_plus_2b(&planes, 1e-12) {
            LpSolution::Optimal { a, b, objective } => {
                prop_assert!((objective - naive).abs() <= 1e-9 * naive.max(1.0),
                    "envelope {objective} vs naive {naive}");
                prop_assert!(a >= 0.0 && b >= 0.0);
                for &(ca, cb, l) in &rows {
                    prop_assert!(ca * a + cb * b >= l - 1e-9);
                }
            }
            LpSolution::Infeasible { .. } => prop_assert!(false, "unexpected infeasible"),
        }
    }
}
