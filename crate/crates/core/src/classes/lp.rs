//! Two-variable LP: minimise `a + 2b` subject to `a·A_i + b·B_i ≥ L_i`,
//! `a, b ≥ 0`, with every `A_i, B_i ≥ 0`.
//!
//! Each half-plane with `B_i > 0` reads `b ≥ c_i - s_i a` with `c_i = L_i/B_i`
//! and `s_i = A_i/B_i`, and rows with `B_i = 0` give a floor on `a`. The
//! feasible region is therefore `a ≥ a_floor`, `b ≥ f(a)` with `f` the upper
//! envelope of those lines and the axis `b = 0`. The objective is convex and
//! piecewise linear along that boundary, so the optimum sits at `a_floor` or at
//! an envelope breakpoint. The vertices are enumerated exactly and the cheapest
//! wins, ties broken by smaller `a`, then smaller `b`.

use std::collections::BTreeMap;

use crate::Scalar;

/// Quantisation used to deduplicate normalised rows.
const DEDUP_RESOLUTION: f64 = 1e12;

/// Half-plane `a·a_coef + b·b_coef ≥ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane<S: Scalar> {
    pub a_coef: S,
    pub b_coef: S,
    pub rhs: S,
    /// Index of the originating constraint.
    pub source: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LpSolution<S: Scalar> {
    Optimal {
        a: S,
        b: S,
        objective: S,
    },
    /// Row `source` has `A = B = 0 < L` and cannot be met.
    Infeasible {
        source: usize,
    },
}

#[derive(Debug, Clone, Copy)]
struct Line<S> {
    slope: S,
    intercept: S,
}

impl<S: Scalar> Line<S> {
    fn at(&self, a: S) -> S {
        self.intercept + self.slope * a
    }
}

/// Scales rows to unit max coordinate, drops rows satisfied by every
/// non-negative `(a, b)`, and deduplicates at `1e-12` resolution. The result
/// is in canonical order regardless of input order.
fn normalise<S: Scalar>(rows: &[HalfPlane<S>], tol: S) -> Result<Vec<HalfPlane<S>>, usize> {
    let mut unique: BTreeMap<(i64, i64, i64), HalfPlane<S>> = BTreeMap::new();
    for row in rows {
        let a_coef = row.a_coef.max(S::zero());
        let b_coef = row.b_coef.max(S::zero());
        let scale = a_coef.max(b_coef).max(row.rhs);
        if !(scale > S::zero()) {
            continue;
        }
        let (a_coef, b_coef, rhs) = (a_coef / scale, b_coef / scale, row.rhs / scale);
        if rhs <= tol {
            continue;
        }
        if a_coef <= tol && b_coef <= tol {
            return Err(row.source);
        }
        let key = |v: S| (v.as_f64() * DEDUP_RESOLUTION).round() as i64;
        let normalised = HalfPlane {
            a_coef,
            b_coef,
            rhs,
            source: row.source,
        };
        unique
            .entry((key(a_coef), key(b_coef), key(rhs)))
            .and_modify(|kept| {
                if normalised.source < kept.source {
                    *kept = normalised;
                }
            })
            .or_insert(normalised);
    }
    Ok(unique.into_values().collect())
}

/// Upper envelope of `lines` (sorted by slope ascending, equal slopes
/// collapsed to the highest intercept).
fn upper_envelope<S: Scalar>(mut lines: Vec<Line<S>>) -> Vec<Line<S>> {
    lines.sort_by(|l, r| {
        l.slope
            .partial_cmp(&r.slope)
            .unwrap()
            .then(r.intercept.partial_cmp(&l.intercept).unwrap())
    });
    lines.dedup_by(|later, kept| later.slope == kept.slope);
    let mut hull: Vec<Line<S>> = Vec::with_capacity(lines.len());
    for line in lines {
        while hull.len() >= 2 {
            let l1 = hull[hull.len() - 2];
            let l2 = hull[hull.len() - 1];
            // l2 never attains the max once l1 and `line` cross at or before
            // the point where l1 and l2 cross.
            let lhs = (l1.intercept - line.intercept) * (l2.slope - l1.slope);
            let rhs = (l1.intercept - l2.intercept) * (line.slope - l1.slope);
            if lhs <= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(line);
    }
    hull
}

/// Solves the LP exactly. `tol` is the relative threshold below which a
/// normalised coefficient counts as zero.
pub fn minimize_a_plus_2b<S: Scalar>(rows: &[HalfPlane<S>], tol: S) -> LpSolution<S> {
    let rows = match normalise(rows, tol) {
        Ok(rows) => rows,
        Err(source) => return LpSolution::Infeasible { source },
    };
    let two = S::lit(2.0);

    let mut a_floor = S::zero();
    let mut lines = vec![Line {
        slope: S::zero(),
        intercept: S::zero(),
    }];
    for row in &rows {
        if row.b_coef <= tol {
            a_floor = a_floor.max(row.rhs / row.a_coef);
        } else {
            lines.push(Line {
                slope: -row.a_coef / row.b_coef,
                intercept: row.rhs / row.b_coef,
            });
        }
    }

    let b_at = |a: S| lines.iter().fold(S::zero(), |m, l| m.max(l.at(a)));

    let hull = upper_envelope(lines.clone());
    let mut candidates = vec![a_floor];
    candidates.extend(hull.windows(2).filter_map(|w| {
        let x = (w[0].intercept - w[1].intercept) / (w[1].slope - w[0].slope);
        (x.is_finite() && x > a_floor).then_some(x)
    }));

    let mut best: Option<(S, S, S)> = None;
    for a in candidates {
        let b = b_at(a);
        let objective = a + two * b;
        let better = match best {
            None => true,
            Some((ba, bb, bo)) => {
                let tie = S::lit(1e-12) * S::one().max(bo.abs());
                if objective < bo - tie {
                    true
                } else if objective <= bo + tie {
                    a < ba || (a == ba && b < bb)
                } else {
                    false
                }
            }
        };
        if better {
            best = Some((a, b, objective));
        }
    }
    let (a, b, objective) = best.expect("a_floor is always a candidate");
    LpSolution::Optimal { a, b, objective }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(a_coef: f64, b_coef: f64, rhs: f64, source: usize) -> HalfPlane<f64> {
        HalfPlane {
            a_coef,
            b_coef,
            rhs,
            source,
        }
    }

    fn optimum(rows: &[HalfPlane<f64>]) -> (f64, f64, f64) {
        match minimize_a_plus_2b(rows, 1e-12) {
            LpSolution::Optimal { a, b, objective } => (a, b, objective),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_problem_is_origin() {
        assert_eq!(optimum(&[]), (0.0, 0.0, 0.0));
    }

    #[test]
    fn single_row_prefers_cheaper_axis() {
        // a + b/2 >= 1/2: (0.5, 0) costs 0.5, (0, 1) costs 2
        let (a, b, obj) = optimum(&[hp(1.0, 0.5, 0.5, 0)]);
        assert_eq!((a, b), (0.5, 0.0));
        assert_eq!(obj, 0.5);
        // a/4 + b >= 1: (4, 0) costs 4, (0, 1) costs 2
        let (a, b, obj) = optimum(&[hp(0.25, 1.0, 1.0, 0)]);
        assert_eq!((a, b, obj), (0.0, 1.0, 2.0));
    }

    #[test]
    fn interior_vertex_wins() {
        // a + b >= 1 and a + 3b >= 1.5 (with a + 2b objective)
        // vertices: (0, 1) -> 2, (0.75, 0.25) -> 1.25, (1.5, 0) -> 1.5
        let (a, b, obj) = optimum(&[hp(1.0, 1.0, 1.0, 0), hp(1.0, 3.0, 1.5, 1)]);
        assert!((a - 0.75).abs() < 1e-15 && (b - 0.25).abs() < 1e-15);
        assert!((obj - 1.25).abs() < 1e-15);
    }

    #[test]
    fn pure_a_rows_set_floor() {
        let (a, b, _) = optimum(&[hp(1.0, 0.0, 1.0, 0), hp(2.0, 0.0, 1.0, 1)]);
        assert_eq!((a, b), (1.0, 0.0));
    }

    #[test]
    fn degenerate_row_is_infeasible() {
        assert_eq!(
            minimize_a_plus_2b(&[hp(1.0, 1.0, 1.0, 0), hp(0.0, 0.0, 0.3, 7)], 1e-12),
            LpSolution::Infeasible { source: 7 }
        );
    }

    #[test]
    fn trivially_satisfied_rows_are_dropped() {
        assert_eq!(
            optimum(&[hp(0.0, 0.0, 0.0, 0), hp(1.0, 1.0, -2.0, 1)]),
            (0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn ties_break_toward_smaller_a() {
        // a + 2b >= 1 is parallel to the objective: every point of the edge
        // costs 1; (0, 0.5) has the smallest a.
        let (a, b, obj) = optimum(&[hp(1.0, 2.0, 1.0, 0)]);
        assert_eq!((a, b, obj), (0.0, 0.5, 1.0));
    }

    #[test]
    fn proportional_rows_deduplicate() {
        let rows: Vec<_> = (1..=8)
            .map(|k| {
                let w = (k as f64 / 7.0).exp();
                hp(w, 0.5 * w, 0.5 * w, k)
            })
            .collect();
        assert_eq!(normalise(&rows, 1e-12).unwrap().len(), 1);
        assert_eq!(optimum(&rows).0, 0.5);
    }

    #[test]
    fn canonical_order_ignores_input_order() {
        let rows = vec![
            hp(1.0, 1.0, 1.0, 0),
            hp(1.0, 3.0, 1.5, 1),
            hp(0.2, 1.0, 0.4, 2),
        ];
        let mut reversed = rows.clone();
        reversed.reverse();
        assert_eq!(optimum(&rows), optimum(&reversed));
    }
}
