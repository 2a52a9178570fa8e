//! Picard iteration for mappings of class `D_T(a, b)`.
//!
//! With `λ = (a + b)/(1 - b)`, membership gives
//! `d(Tx_n, Tx_{n+1}) ≤ λⁿ d(Tx₀, Tx₁)` and, by telescoping,
//! `d(Tx_m, Tx_n) ≤ λⁿ/(1 - λ) d(Tx₀, Tx₁)` for `m > n`. The solver stops on
//! the a-posteriori form `λ/(1 - λ) ‖d(Tx_n, Tx_{n+1})‖ ≤ tol` and records
//! everything needed to re-check both bounds afterwards.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cone_space::{ConeMetricSpace, EVector};
use crate::mappings::MappingPair;
use crate::{Error, Result, Scalar};

/// Relative slack allowed on the geometric rate bound.
pub const RATE_SLACK: f64 = 1e-9;
/// Growth factor over the first step that flags divergence.
pub const DIVERGENCE_FACTOR: f64 = 10.0;
/// Rounding allowance, in units of epsilon, for the rate bound floor.
const ROUNDING_ULPS: f64 = 64.0;
/// Largest number of `(m, n)` pairs sampled for the Cauchy check.
const CAUCHY_PAIRS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IterationStatus {
    Converged,
    MaxIterations,
    Diverged,
}

/// How much the iterates themselves (not their T-images) are known to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointConvergence {
    /// `T` is declared sequentially convergent: `x_n` converges.
    Guaranteed,
    /// Only subsequential convergence of `x_n` is declared.
    Subsequential,
    /// Neither is declared; only `Tx_n` is known to converge.
    Unverified,
}

impl PointConvergence {
    fn of<S: Scalar>(pair: &MappingPair<S>) -> Self {
        if pair.declared.t_sequentially_convergent {
            Self::Guaranteed
        } else if pair.declared.t_subsequentially_convergent {
            Self::Subsequential
        } else {
            Self::Unverified
        }
    }
}

/// Full record of a Picard run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct IterationTrace<S: Scalar> {
    pub x0: S,
    /// `x_0, x_1, …` with `x_{n+1} = S x_n`.
    pub iterates: Vec<S>,
    /// `T x_n` for each iterate.
    pub t_images: Vec<S>,
    /// `d(Tx_n, Tx_{n+1})`.
    pub step_dists: Vec<EVector<S>>,
    pub step_norms: Vec<S>,
    pub lambda: S,
    /// `λⁿ/(1 - λ) ‖d(Tx₀, Tx₁)‖` for each iterate index.
    pub a_priori_bound: Vec<S>,
    pub status: IterationStatus,
    pub point_convergence: PointConvergence,
    #[serde(skip)]
    space: Option<ConeMetricSpace<S>>,
}

impl<S: Scalar> IterationTrace<S> {
    pub fn steps(&self) -> usize {
        self.step_norms.len()
    }

    /// Steps that actually moved the T-image.
    pub fn effective_steps(&self) -> usize {
        self.step_norms.iter().filter(|s| **s > S::zero()).count()
    }

    /// `step_norms[n] / step_norms[n-1]` for `n ≥ 1` (NaN where undefined).
    pub fn ratios(&self) -> Vec<S> {
        self.step_norms.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// CSV with header `n,x_n,step_norm,a_priori_bound,ratio`, one row per
    /// iterate, values at 17 significant digits, blank where undefined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,x_n,step_norm,a_priori_bound,ratio\n");
        let sci = |v: S| format!("{:.16e}", v.as_f64());
        for (n, &x) in self.iterates.iter().enumerate() {
            let step = self.step_norms.get(n).map(|&s| sci(s)).unwrap_or_default();
            let bound = self
                .a_priori_bound
                .get(n)
                .map(|&b| sci(b))
                .unwrap_or_default();
            let ratio = match n {
                0 => String::new(),
                _ => match (self.step_norms.get(n), self.step_norms.get(n - 1)) {
                    (Some(&cur), Some(&prev)) if prev > S::zero() => sci(cur / prev),
                    _ => String::new(),
                },
            };
            let _ = writeln!(out, "{n},{},{step},{bound},{ratio}", sci(x));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FixedPointResult<S: Scalar> {
    pub point: S,
    /// `‖d(Sp, p)‖`.
    pub residual: S,
    pub iterations: usize,
    pub trace: IterationTrace<S>,
}

impl<S: Scalar> FixedPointResult<S> {
    pub fn converged(&self) -> bool {
        self.trace.status == IterationStatus::Converged
    }
}

fn check_hypothesis<S: Scalar>(a: S, b: S) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a >= S::zero() && b >= S::zero()) {
        return Err(Error::NegativeCoefficient {
            a: a.as_f64(),
            b: b.as_f64(),
        });
    }
    if !(a + S::lit(2.0) * b < S::one()) {
        return Err(Error::HypothesisViolated {
            a: a.as_f64(),
            b: b.as_f64(),
            reason: "a + 2b must be below 1",
        });
    }
    Ok(())
}

/// `λ = (a + b)/(1 - b)`.
pub fn contraction_ratio<S: Scalar>(a: S, b: S) -> S {
    (a + b) / (S::one() - b)
}

/// Iterates `x_{n+1} = S x_n` from `x0`.
///
/// Stops once `λ/(1 - λ) ‖d(Tx_n, Tx_{n+1})‖ ≤ tol` and the point residual
/// `‖d(Sx, x)‖` of the last iterate is also within `tol` (`Converged`),
/// when a step exceeds ten times the first one (`Diverged`), or after
/// `max_iter` steps (`MaxIterations`). `(a, b)` must be supplied by the caller
/// and satisfy `a + 2b < 1`.
pub fn picard_solve<S: Scalar>(
    pair: &MappingPair<S>,
    a: S,
    b: S,
    x0: S,
    tol: S,
    max_iter: usize,
) -> Result<FixedPointResult<S>> {
    check_hypothesis(a, b)?;
    if !(tol > S::zero()) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    pair.ensure_in_domain(x0)?;
    let space = &pair.space;
    let lambda = contraction_ratio(a, b);
    let posterior = lambda / (S::one() - lambda);

    let mut iterates = vec![x0];
    let mut t_images = vec![pair.apply_t(x0)?];
    let mut step_dists = Vec::new();
    let mut step_norms: Vec<S> = Vec::new();
    let mut status = IterationStatus::MaxIterations;
    let mut residual = space.distance_norm(pair.apply_s(x0)?, x0)?;

    for _ in 0..max_iter {
        let x = *iterates.last().unwrap();
        let tx = *t_images.last().unwrap();
        let next = pair.apply_s(x)?;
        let t_next = pair.apply_t(next)?;
        let dist = space.distance(tx, t_next)?;
        let norm = space.norm.norm(&dist);
        iterates.push(next);
        t_images.push(t_next);
        step_dists.push(dist);
        step_norms.push(norm);

        if norm > S::lit(DIVERGENCE_FACTOR) * step_norms[0] {
            status = IterationStatus::Diverged;
            break;
        }
        if posterior * norm <= tol {
            residual = space.distance_norm(pair.apply_s(next)?, next)?;
            if residual <= tol {
                status = IterationStatus::Converged;
                break;
            }
        }
    }
    let point = *iterates.last().unwrap();
    if status != IterationStatus::Converged {
        residual = space.distance_norm(pair.apply_s(point)?, point)?;
    }

    let first = step_norms.first().copied().unwrap_or_else(S::zero);
    let a_priori_bound = (0..iterates.len())
        .map(|n| lambda.powi(n as i32) / (S::one() - lambda) * first)
        .collect();
    let iterations = step_norms.len();
    Ok(FixedPointResult {
        point,
        residual,
        iterations,
        trace: IterationTrace {
            x0,
            iterates,
            t_images,
            step_dists,
            step_norms,
            lambda,
            a_priori_bound,
            status,
            point_convergence: PointConvergence::of(pair),
            space: Some(space.clone()),
        },
    })
}

/// Verdict of [`check_rate_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RateReport<S: Scalar> {
    pub passed: bool,
    pub lambda: S,
    /// Smallest `bound_n - step_norms[n]` over the trace; negative on failure.
    pub worst_slack: S,
    /// Indices `n` where `step_norms[n]` exceeds `λⁿ step_norms[0]`.
    pub violations: Vec<usize>,
    /// Consecutive step ratios.
    pub ratios: Vec<S>,
    /// Absolute rounding allowance added to each bound.
    pub rounding_floor: S,
    /// `None` when the trace carries no metric (e.g. deserialised traces).
    pub cauchy_passed: Option<bool>,
    /// Largest `‖d(Tx_m, Tx_n)‖ - λⁿ/(1-λ) step_norms[0]` over sampled pairs.
    pub cauchy_worst_excess: Option<S>,
    pub cauchy_pairs_checked: usize,
}

/// Rounding allowance for distances between T-images. Covers rounding in the
/// images themselves (scale `max |Tx_n|`) and rounding in the iterates carried
/// through T (scale `max |x_n|` times the secant slope of the first step). The
/// first step also fixes the metric's scale.
fn rounding_floor<S: Scalar>(trace: &IterationTrace<S>) -> S {
    let first = trace.step_norms[0];
    let span = (trace.t_images[0] - trace.t_images[1]).abs();
    let run = (trace.iterates[0] - trace.iterates[1]).abs();
    if !(span > S::zero()) {
        return S::zero();
    }
    let largest = |v: &[S]| v.iter().fold(S::zero(), |m, &t| m.max(t.abs()));
    let mut magnitude = largest(&trace.t_images).max(span);
    if run > S::zero() {
        magnitude = magnitude + span / run * largest(&trace.iterates);
    }
    S::lit(ROUNDING_ULPS) * S::epsilon() * magnitude * (first / span)
}

/// Re-checks `step_norms[n] ≤ λⁿ step_norms[0]` and the Cauchy bound
/// `‖d(Tx_m, Tx_n)‖ ≤ λⁿ/(1 - λ) step_norms[0]` against a recorded trace.
pub fn check_rate_bound<S: Scalar>(trace: &IterationTrace<S>) -> Result<RateReport<S>> {
    if trace.steps() < 2 {
        return Err(Error::TraceTooShort {
            steps: trace.steps(),
            required: 2,
        });
    }
    let lambda = trace.lambda;
    let first = trace.step_norms[0];
    let slack = S::one() + S::lit(RATE_SLACK);
    let floor = rounding_floor(trace);

    let mut worst = S::infinity();
    let mut violations = Vec::new();
    for (n, &step) in trace.step_norms.iter().enumerate() {
        let bound = lambda.powi(n as i32) * first * slack + floor;
        let gap = bound - step;
        worst = worst.min(gap);
        if gap < S::zero() {
            violations.push(n);
        }
    }

    let (cauchy_passed, cauchy_worst_excess, cauchy_pairs_checked) = match &trace.space {
        None => (None, None, 0),
        Some(space) => {
            let len = trace.t_images.len();
            let total = len * (len - 1) / 2;
            let stride = total.div_ceil(CAUCHY_PAIRS).max(1);
            let mut excess = S::neg_infinity();
            let mut checked = 0;
            let mut k = 0usize;
            for n in 0..len {
                for m in n + 1..len {
                    k += 1;
                    if !k.is_multiple_of(stride) && m != len - 1 {
                        continue;
                    }
                    let dist = space.distance_norm(trace.t_images[m], trace.t_images[n])?;
                    let bound = lambda.powi(n as i32) / (S::one() - lambda) * first * slack + floor;
                    excess = excess.max(dist - bound);
                    checked += 1;
                }
            }
            (Some(excess <= S::zero()), Some(excess), checked)
        }
    };

    Ok(RateReport {
        passed: violations.is_empty() && cauchy_passed.unwrap_or(true),
        lambda,
        worst_slack: worst,
        violations,
        ratios: trace.ratios(),
        rounding_floor: floor,
        cauchy_passed,
        cauchy_worst_excess,
        cauchy_pairs_checked,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SeedOutcome<S: Scalar> {
    pub x0: S,
    pub point: S,
    pub status: IterationStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct UniquenessReport<S: Scalar> {
    pub unique: bool,
    pub outcomes: Vec<SeedOutcome<S>>,
    /// Largest `‖d(p_i, p_j)‖` between returned points.
    pub max_pairwise_distance: S,
    /// Agreement threshold, `10·tol`.
    pub threshold: S,
}

/// Solves from every seed and checks the returned points agree within `10·tol`.
pub fn verify_uniqueness<S: Scalar>(
    pair: &MappingPair<S>,
    a: S,
    b: S,
    seeds: &[S],
    tol: S,
    max_iter: usize,
) -> Result<UniquenessReport<S>> {
    if !(a < S::one()) {
        return Err(Error::HypothesisViolated {
            a: a.as_f64(),
            b: b.as_f64(),
            reason: "uniqueness needs a < 1",
        });
    }
    let mut outcomes = Vec::with_capacity(seeds.len());
    for &x0 in seeds {
        let result =
            picard_solve(pair, a, b, x0, tol, max_iter).map_err(|e| Error::SolveFailed {
                x0: x0.as_f64(),
                source: Box::new(e),
            })?;
        outcomes.push(SeedOutcome {
            x0,
            point: result.point,
            status: result.trace.status,
            iterations: result.iterations,
        });
    }
    let mut max_dist = S::zero();
    for (i, p) in outcomes.iter().enumerate() {
        for q in &outcomes[i + 1..] {
            max_dist = max_dist.max(pair.space.distance_norm(p.point, q.point)?);
        }
    }
    let threshold = S::lit(10.0) * tol;
    Ok(UniquenessReport {
        unique: max_dist <= threshold
            && outcomes
                .iter()
                .all(|o| o.status == IterationStatus::Converged),
        outcomes,
        max_pairwise_distance: max_dist,
        threshold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DiagnosticsReport<S: Scalar> {
    pub p: S,
    /// `‖d(Tx_k, TSx_k)‖` along the sequence.
    pub displacement_norms: Vec<S>,
    /// `‖d(TSx_k, TSp)‖` along the sequence.
    pub image_gap_norms: Vec<S>,
    /// Displacement norms decrease over the tail and end below `tol`.
    pub displacement_vanishes: bool,
    /// `‖d(Sp, p)‖ ≤ tol`.
    pub p_is_fixed: bool,
    /// `TSx_k → TSp`: image gaps decrease over the tail and end below `tol`.
    pub s_continuous_at_p: bool,
    /// `‖d(Sp, p)‖`.
    pub fixed_point_residual: S,
    /// `|Sp - p|`.
    pub point_gap: S,
    /// `(1 - b) d(TSx_k, Tx_k) ≤ (1 + a) d(Tx_k, Tp)` in the cone order for
    /// every k; only evaluated when `p` is fixed.
    pub displacement_bound_holds: Option<bool>,
    pub tol: S,
}

impl<S: Scalar> DiagnosticsReport<S> {
    pub fn all_pass(&self) -> bool {
        self.displacement_vanishes
            && self.p_is_fixed
            && self.s_continuous_at_p
            && self.displacement_bound_holds.unwrap_or(true)
    }
}

/// The last value is within `tol` and the second half of `values` is
/// non-increasing up to rounding.
fn tends_to_zero<S: Scalar>(values: &[S], tol: S) -> bool {
    let Some(&last) = values.last() else {
        return false;
    };
    let tail = &values[values.len() / 2..];
    let noise = S::lit(1e-12);
    last <= tol
        && tail
            .windows(2)
            .all(|w| w[1] <= w[0] + noise * S::one().max(w[0]))
}

/// Default approach sequence `p ∓ 2⁻ᵏ`, `k = 1..=count`, stepping inward
/// from whichever side stays in the domain.
pub fn approach_sequence<S: Scalar>(pair: &MappingPair<S>, p: S, count: usize) -> Vec<S> {
    let domain = pair.domain();
    (1..=count)
        .map(|k| {
            let h = S::lit(0.5).powi(k as i32);
            if domain.contains(p - h, S::zero()) {
                p - h
            } else if domain.contains(p + h, S::zero()) {
                p + h
            } else {
                domain.clamp(p - h)
            }
        })
        .collect()
}

/// Evaluates the continuity statements along a sequence approaching `p`:
/// `d(Tx_k, TSx_k) → 0`, `p` fixed, and `TSx_k → TSp`.
pub fn continuity_diagnostics<S: Scalar>(
    pair: &MappingPair<S>,
    a: S,
    b: S,
    p: S,
    sequence: &[S],
    tol: S,
) -> Result<DiagnosticsReport<S>> {
    if !(b < S::one() && a >= S::zero() && b >= S::zero()) {
        return Err(Error::HypothesisViolated {
            a: a.as_f64(),
            b: b.as_f64(),
            reason: "diagnostics need 0 <= b < 1 and a >= 0",
        });
    }
    if sequence.is_empty() {
        return Err(Error::InvalidArgument("approach sequence is empty".into()));
    }
    let space = &pair.space;
    let sp = pair.apply_s(p)?;
    let tp = pair.apply_t(p)?;
    let tsp = pair.apply_t(sp)?;
    let residual = space.distance_norm(sp, p)?;
    let p_is_fixed = residual <= tol;

    let mut displacement_norms = Vec::with_capacity(sequence.len());
    let mut image_gap_norms = Vec::with_capacity(sequence.len());
    let mut bound_holds = true;
    for &x in sequence {
        let tx = pair.apply_t(x)?;
        let tsx = pair.apply_t(pair.apply_s(x)?)?;
        let displacement = space.distance(tx, tsx)?;
        displacement_norms.push(space.norm.norm(&displacement));
        image_gap_norms.push(space.distance_norm(tsx, tsp)?);
        if p_is_fixed {
            let lhs = displacement.scale(S::one() - b);
            let rhs = space.distance(tx, tp)?.scale(S::one() + a);
            bound_holds &= space.cone.leq(&lhs, &rhs)?;
        }
    }

    Ok(DiagnosticsReport {
        p,
        displacement_vanishes: tends_to_zero(&displacement_norms, tol),
        s_continuous_at_p: tends_to_zero(&image_gap_norms, tol),
        displacement_norms,
        image_gap_norms,
        p_is_fixed,
        fixed_point_residual: residual,
        point_gap: (sp - p).abs(),
        displacement_bound_holds: p_is_fixed.then_some(bound_holds),
        tol,
    })
}
