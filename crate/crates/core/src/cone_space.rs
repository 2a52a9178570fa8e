//! The ordered vector space `E`, orthant cones and the order they induce,
//! Banach norms on `E`, and cone metric spaces with sampled axiom checks.

use std::fmt;
use std::ops::Index;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::sampling;
use crate::{Error, Result, Scalar};

/// Default coordinate tolerance for cone membership and equality.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
/// Default margin for strict interior tests.
pub const DEFAULT_INTERIOR_MARGIN: f64 = 1e-9;
/// Default number of grid samples of `e^t` on `[0, 1]`.
pub const DEFAULT_EXP_GRID: usize = 8;

/// Number of evenly spaced grid points mixed into every sampled check.
pub(crate) const CHECK_GRID_POINTS: usize = 9;

/// Element of the finite-dimensional ordered vector space `E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(transparent)]
pub struct EVector<S: Scalar>(Vec<S>);

impl<S: Scalar> EVector<S> {
    /// Builds a vector, rejecting empty or non-finite coordinates.
    pub fn new(coords: Vec<S>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(index) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self(coords))
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| S::lit(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![S::zero(); dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<S> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.0.iter()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(&x, &y)| x + y).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(&x, &y)| x - y).collect(),
        ))
    }

    pub fn scale(&self, factor: S) -> Self {
        Self(self.0.iter().map(|&x| x * factor).collect())
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: S, other: &Self, beta: S) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&x, &y)| alpha * x + beta * y)
                .collect(),
        ))
    }

    pub fn max_abs(&self) -> S {
        self.0.iter().fold(S::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn min_coord(&self) -> S {
        self.0.iter().fold(S::infinity(), |m, &x| m.min(x))
    }
}

impl<S: Scalar> Index<usize> for EVector<S> {
    type Output = S;

    fn index(&self, i: usize) -> &S {
        &self.0[i]
    }
}

/// Built-in cone families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[non_exhaustive]
pub enum ConeKind {
    /// The nonnegative orthant of dimension `n`.
    Orthant(usize),
}

/// A closed convex cone `P` in `E` together with its tolerances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Cone<S: Scalar> {
    pub kind: ConeKind,
    pub interior_margin: S,
    pub tolerance: S,
}

impl<S: Scalar> Cone<S> {
    pub fn orthant(dim: usize) -> Self {
        Self {
            kind: ConeKind::Orthant(dim.max(1)),
            interior_margin: S::lit(DEFAULT_INTERIOR_MARGIN),
            tolerance: S::lit(DEFAULT_TOLERANCE),
        }
    }

    pub fn with_interior_margin(mut self, margin: S) -> Self {
        self.interior_margin = margin;
        self
    }

    pub fn with_tolerance(mut self, tolerance: S) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ConeKind::Orthant(n) => n,
        }
    }

    fn check_dim(&self, v: &EVector<S>) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        Ok(())
    }

    /// `v ∈ P` up to the coordinate tolerance.
    pub fn contains(&self, v: &EVector<S>) -> Result<bool> {
        self.check_dim(v)?;
        Ok(match self.kind {
            ConeKind::Orthant(_) => v.iter().all(|&c| c >= -self.tolerance),
        })
    }

    /// `v ∈ Int P`: every coordinate clears the interior margin.
    pub fn contains_interior(&self, v: &EVector<S>) -> Result<bool> {
        self.check_dim(v)?;
        Ok(match self.kind {
            ConeKind::Orthant(_) => v.iter().all(|&c| c > self.interior_margin),
        })
    }

    /// The partial order `x ≤ y` iff `y - x ∈ P`.
    pub fn leq(&self, x: &EVector<S>, y: &EVector<S>) -> Result<bool> {
        self.check_dim(x)?;
        self.contains(&y.sub(x)?)
    }

    /// The strict order `x ≪ y` iff `y - x ∈ Int P`.
    pub fn ll(&self, x: &EVector<S>, y: &EVector<S>) -> Result<bool> {
        self.check_dim(x)?;
        self.contains_interior(&y.sub(x)?)
    }

    /// How far `v` sits outside the cone; zero or negative when inside.
    pub(crate) fn excess(&self, v: &EVector<S>) -> S {
        match self.kind {
            ConeKind::Orthant(_) => -v.min_coord(),
        }
    }
}

/// Free-function form of [`Cone::contains`].
pub fn cone_contains<S: Scalar>(cone: &Cone<S>, v: &EVector<S>) -> Result<bool> {
    cone.contains(v)
}

/// Free-function form of [`Cone::leq`].
pub fn order_leq<S: Scalar>(cone: &Cone<S>, x: &EVector<S>, y: &EVector<S>) -> Result<bool> {
    cone.leq(x, y)
}

/// Free-function form of [`Cone::ll`].
pub fn order_ll<S: Scalar>(cone: &Cone<S>, x: &EVector<S>, y: &EVector<S>) -> Result<bool> {
    cone.ll(x, y)
}

/// Banach norm on `E`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub enum NormSpec<S: Scalar> {
    Sup,
    Euclidean,
    /// `max |x_i| + max_i w_i |x_{i+1} - x_i|`, a grid version of
    /// `‖f‖∞ + ‖f′‖∞`. Differences past the end of `weights` are ignored.
    SupPlusWeighted(Vec<S>),
}

impl<S: Scalar> NormSpec<S> {
    /// Finite-difference weights `1/h` for `points` samples on `[lo, hi]`.
    pub fn finite_difference(points: usize, lo: S, hi: S) -> Self {
        let intervals = points.saturating_sub(1).max(1);
        let h = (hi - lo) / S::lit(intervals as f64);
        Self::SupPlusWeighted(vec![S::one() / h; intervals])
    }

    pub fn norm(&self, v: &EVector<S>) -> S {
        match self {
            Self::Sup => v.max_abs(),
            Self::Euclidean => v.iter().fold(S::zero(), |acc, &x| acc.hypot(x)),
            Self::SupPlusWeighted(weights) => {
                let slope = v
                    .coords()
                    .windows(2)
                    .zip(weights)
                    .fold(S::zero(), |m, (w, &wt)| m.max(wt * (w[1] - w[0]).abs()));
                v.max_abs() + slope
            }
        }
    }
}

/// Lower bound on the normal constant of `cone` under `norm`: the largest
/// `‖x‖ / ‖y‖` seen over sampled pairs with `0 ≤ x ≤ y`.
///
/// Even-indexed samples use `y = (1, …, 1)` with `x` a 0/1 corner of the box
/// `[0, y]`; odd-indexed samples draw `y` and the fraction `x / y` uniformly.
/// The estimate is a running maximum over a fixed stream, so it never
/// decreases as `sample_count` grows.
pub fn estimate_normal_constant<S: Scalar>(
    cone: &Cone<S>,
    norm: &NormSpec<S>,
    sample_count: usize,
    seed: u64,
) -> S {
    let n = cone.dim();
    let corners = 1usize.checked_shl(n.min(20) as u32).unwrap_or(usize::MAX);
    let mut rng = sampling::rng(seed);
    let mut best = S::one();
    for i in 0..sample_count {
        let (x, y) = if i % 2 == 0 {
            let pattern = (i / 2) % corners;
            let x = (0..n)
                .map(|k| {
                    if pattern >> k & 1 == 1 {
                        S::one()
                    } else {
                        S::zero()
                    }
                })
                .collect();
            (x, vec![S::one(); n])
        } else {
            let y: Vec<S> = (0..n).map(|_| sampling::unit::<S>(&mut rng)).collect();
            let x = y
                .iter()
                .map(|&yk| yk * sampling::unit::<S>(&mut rng))
                .collect();
            (x, y)
        };
        let ny = norm.norm(&EVector(y));
        if ny > S::zero() {
            best = best.max(norm.norm(&EVector(x)) / ny);
        }
    }
    best
}

/// Closed real interval serving as the point set `M` (or a codomain for `T`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PointDomain<S: Scalar> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> PointDomain<S> {
    pub fn interval(lo: S, hi: S) -> Self {
        Self { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi)
    }

    pub(crate) fn ensure_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptyDomain {
                lo: self.lo.as_f64(),
                hi: self.hi.as_f64(),
            });
        }
        Ok(())
    }

    pub fn width(&self) -> S {
        self.hi - self.lo
    }

    /// Inclusive membership with absolute tolerance `tol`.
    pub fn contains(&self, x: S, tol: S) -> bool {
        x.is_finite() && x >= self.lo - tol && x <= self.hi + tol
    }

    /// `count` evenly spaced points including both endpoints.
    pub fn grid(&self, count: usize) -> Vec<S> {
        match count {
            0 => Vec::new(),
            1 => vec![self.lo],
            _ => {
                let last = S::lit((count - 1) as f64);
                (0..count)
                    .map(|i| {
                        if i == count - 1 {
                            self.hi
                        } else {
                            self.lo + self.width() * S::lit(i as f64) / last
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn clamp(&self, x: S) -> S {
        x.max(self.lo).min(self.hi)
    }
}

impl<S: Scalar> fmt::Display for PointDomain<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Metric map `d: M × M → E`.
pub type MetricFn<S> = Arc<dyn Fn(S, S) -> EVector<S> + Send + Sync>;

/// `d(x, y) = |x - y| w` for a fixed weight vector `w ∈ P`.
pub fn weighted_abs_metric<S: Scalar>(weights: Vec<S>) -> MetricFn<S> {
    Arc::new(move |x: S, y: S| {
        let gap = (x - y).abs();
        EVector(weights.iter().map(|&w| gap * w).collect())
    })
}

/// Samples of `e^t` on a uniform grid of `points` nodes over `[0, 1]`.
pub fn exp_grid_weights<S: Scalar>(points: usize) -> Vec<S> {
    PointDomain::interval(S::zero(), S::one())
        .grid(points.max(1))
        .into_iter()
        .map(S::exp)
        .collect()
}

/// A point domain with a cone-valued metric.
#[derive(Clone)]
pub struct ConeMetricSpace<S: Scalar> {
    pub label: String,
    pub domain: PointDomain<S>,
    pub cone: Cone<S>,
    pub norm: NormSpec<S>,
    metric: MetricFn<S>,
}

impl<S: Scalar> fmt::Debug for ConeMetricSpace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeMetricSpace")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("cone", &self.cone)
            .field("norm", &self.norm)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> ConeMetricSpace<S> {
    pub fn new(
        label: impl Into<String>,
        domain: PointDomain<S>,
        cone: Cone<S>,
        norm: NormSpec<S>,
        metric: MetricFn<S>,
    ) -> Self {
        Self {
            label: label.into(),
            domain,
            cone,
            norm,
            metric,
        }
    }

    /// `d(x, y) = |x - y| e^t` sampled on `grid` nodes, orthant cone, sup norm.
    pub fn exp_weighted(label: impl Into<String>, domain: PointDomain<S>, grid: usize) -> Self {
        let weights = exp_grid_weights(grid);
        let cone = Cone::orthant(weights.len());
        Self::new(
            label,
            domain,
            cone,
            NormSpec::Sup,
            weighted_abs_metric(weights),
        )
    }

    /// `d(x, y) = |x - y|` on the real line, `E = ℝ`.
    pub fn absolute(label: impl Into<String>, domain: PointDomain<S>) -> Self {
        Self::new(
            label,
            domain,
            Cone::orthant(1),
            NormSpec::Sup,
            weighted_abs_metric(vec![S::one()]),
        )
    }

    /// `d(x, y) = (|x - y|, α|x - y|)` with `E = ℝ²`.
    pub fn planar(label: impl Into<String>, domain: PointDomain<S>, alpha: S) -> Self {
        Self::new(
            label,
            domain,
            Cone::orthant(2),
            NormSpec::Sup,
            weighted_abs_metric(vec![S::one(), alpha]),
        )
    }

    pub fn e_dim(&self) -> usize {
        self.cone.dim()
    }

    /// Evaluates `d(x, y)` and checks it lands in `E` with the right dimension.
    pub fn distance(&self, x: S, y: S) -> Result<EVector<S>> {
        let d = (self.metric)(x, y);
        if d.dim() != self.e_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.e_dim(),
                found: d.dim(),
            });
        }
        if let Some(index) = d.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(d)
    }

    /// `‖d(x, y)‖` under the space's norm.
    pub fn distance_norm(&self, x: S, y: S) -> Result<S> {
        Ok(self.norm.norm(&self.distance(x, y)?))
    }
}

/// Outcome of one sampled axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AxiomOutcome<S: Scalar> {
    pub holds: bool,
    /// Largest absolute violation among those beyond tolerance; zero when
    /// none was found.
    pub worst_violation: S,
    /// Points of the worst violation (`[x, y]` or `[x, y, z]`), empty if none.
    pub witness: Vec<S>,
}

impl<S: Scalar> AxiomOutcome<S> {
    fn new() -> Self {
        Self {
            holds: true,
            worst_violation: S::zero(),
            witness: Vec::new(),
        }
    }

    fn record(&mut self, violation: S, witness: &[S]) {
        if violation > self.worst_violation {
            self.holds = false;
            self.worst_violation = violation;
            self.witness = witness.to_vec();
        }
    }
}

/// Per-axiom result of [`check_metric_axioms`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AxiomReport<S: Scalar> {
    pub space: String,
    /// `d(x, y) ∈ P`, and `d(x, y) = 0` exactly when `x = y`.
    pub positivity: AxiomOutcome<S>,
    pub symmetry: AxiomOutcome<S>,
    /// `d(x, z) + d(y, z) - d(x, y) ∈ P`.
    pub triangle: AxiomOutcome<S>,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub seed: u64,
}

impl<S: Scalar> AxiomReport<S> {
    pub fn all_hold(&self) -> bool {
        self.positivity.holds && self.symmetry.holds && self.triangle.holds
    }
}

/// Checks the three cone-metric axioms on a deterministic sample.
///
/// Every pair and triple of a 9-point grid over the domain is checked, then
/// `sample_count` seeded random pairs and triples. A violation counts when it
/// exceeds the cone tolerance after scaling by `max(1, |d(x, y)_i|)`; the
/// reported witness is the one with the largest unscaled violation.
pub fn check_metric_axioms<S: Scalar>(
    space: &ConeMetricSpace<S>,
    sample_count: usize,
    seed: u64,
) -> Result<AxiomReport<S>> {
    if sample_count == 0 {
        return Err(Error::NoSamples);
    }
    space.domain.ensure_nonempty()?;
    let tol = space.cone.tolerance;
    let grid = space.domain.grid(CHECK_GRID_POINTS);
    let mut rng = sampling::rng(seed);

    let mut positivity = AxiomOutcome::new();
    let mut symmetry = AxiomOutcome::new();
    let mut triangle = AxiomOutcome::new();

    let mut check_pair = |x: S, y: S| -> Result<()> {
        let dxy = space.distance(x, y)?;
        let dyx = space.distance(y, x)?;
        let excess = space.cone.excess(&dxy);
        if excess > tol {
            positivity.record(excess, &[x, y]);
        }
        if x == y {
            let size = dxy.max_abs();
            if size > tol {
                positivity.record(size, &[x, y]);
            }
        } else if dxy.iter().all(|c| c.is_zero()) {
            positivity.record((x - y).abs(), &[x, y]);
        }
        let (asym_rel, asym) = dxy
            .iter()
            .zip(dyx.iter())
            .map(|(&p, &q)| ((p - q).abs() / S::one().max(p.abs()), (p - q).abs()))
            .fold((S::zero(), S::zero()), |(r, v), (rr, vv)| {
                (r.max(rr), v.max(vv))
            });
        if asym_rel > tol {
            symmetry.record(asym, &[x, y]);
        }
        Ok(())
    };
    for &x in &grid {
        for &y in &grid {
            check_pair(x, y)?;
        }
    }
    for _ in 0..sample_count {
        let x = sampling::uniform(&mut rng, space.domain.lo, space.domain.hi);
        let y = sampling::uniform(&mut rng, space.domain.lo, space.domain.hi);
        check_pair(x, y)?;
        check_pair(x, x)?;
    }
    let pairs_checked = grid.len() * grid.len() + 2 * sample_count;

    let mut check_triple = |x: S, y: S, z: S| -> Result<()> {
        let dxy = space.distance(x, y)?;
        let slack = space
            .distance(x, z)?
            .add(&space.distance(y, z)?)?
            .sub(&dxy)?;
        let (relative, violation) = slack
            .iter()
            .zip(dxy.iter())
            .map(|(&s, &d)| (-s / S::one().max(d.abs()), -s))
            .fold(
                (S::neg_infinity(), S::neg_infinity()),
                |(r, v), (rr, vv)| (r.max(rr), v.max(vv)),
            );
        if relative > tol {
            triangle.record(violation, &[x, y, z]);
        }
        Ok(())
    };
    for &x in &grid {
        for &y in &grid {
            for &z in &grid {
                check_triple(x, y, z)?;
            }
        }
    }
    for _ in 0..sample_count {
        let x = sampling::uniform(&mut rng, space.domain.lo, space.domain.hi);
        let y = sampling::uniform(&mut rng, space.domain.lo, space.domain.hi);
        let z = sampling::uniform(&mut rng, space.domain.lo, space.domain.hi);
        check_triple(x, y, z)?;
    }
    let triples_checked = grid.len().pow(3) + sample_count;

    Ok(AxiomReport {
        space: space.label.clone(),
        positivity,
        symmetry,
        triangle,
        pairs_checked,
        triples_checked,
        seed,
    })
}
