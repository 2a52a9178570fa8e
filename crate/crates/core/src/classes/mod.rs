//! Empirical membership in `D_T(a, b)`.
//!
//! Each sampled pair `(x, y)` yields the cone vectors
//!
//! ```text
//! L = d(TSx, TSy),  A = d(Tx, Ty),  B = d(Tx, TSx) + d(Ty, TSy)
//! ```
//!
//! and membership requires `a·A + b·B - L ∈ P` for every pair. Certification
//! evaluates that residual at a given `(a, b)`; fitting finds the `(a, b)`
//! minimising `a + 2b` over the sampled constraints.

pub mod lp;

use serde::{Deserialize, Serialize};

use crate::cone_space::{EVector, CHECK_GRID_POINTS, DEFAULT_TOLERANCE};
use crate::mappings::MappingPair;
use crate::sampling;
use crate::{Error, Result, Scalar};

use lp::{HalfPlane, LpSolution};

/// Tolerance on the scaled residual `(L_i - a A_i - b B_i) / max(1, L_i)`.
pub const CERTIFY_TOLERANCE: f64 = 1e-9;
/// Witnesses kept on a violated certificate.
pub const MAX_WITNESSES: usize = 10;
/// Active constraints kept on a fit result.
pub const MAX_ACTIVE: usize = 16;
/// Near-coincident gaps, as fractions of the domain width.
const NEAR_GAPS: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
/// Random centres drawn per near-coincident gap.
const NEAR_CENTRES: usize = 2;

/// One sampled instance of the class inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PairConstraint<S: Scalar> {
    /// `d(TSx, TSy)`
    #[serde(rename = "L")]
    pub image_gap: EVector<S>,
    /// `d(Tx, Ty)`
    #[serde(rename = "A")]
    pub base_gap: EVector<S>,
    /// `d(Tx, TSx) + d(Ty, TSy)`
    #[serde(rename = "B")]
    pub displacement: EVector<S>,
    pub witness: (S, S),
}

impl<S: Scalar> PairConstraint<S> {
    /// `L - a A - b B`, coordinatewise.
    pub fn raw_residual(&self, a: S, b: S) -> EVector<S> {
        let coords = self
            .image_gap
            .iter()
            .zip(self.base_gap.iter())
            .zip(self.displacement.iter())
            .map(|((&l, &aa), &bb)| l - a * aa - b * bb)
            .collect();
        EVector::new(coords).unwrap_or_else(|_| EVector::zeros(self.image_gap.dim()))
    }

    /// Largest coordinate of `L - a A - b B`, each scaled by `max(1, L_i)`.
    pub fn residual(&self, a: S, b: S) -> S {
        self.image_gap
            .iter()
            .zip(self.raw_residual(a, b).iter())
            .map(|(&l, &r)| r / S::one().max(l.abs()))
            .fold(S::neg_infinity(), S::max)
    }

    /// Coordinates `(A_i, B_i, L_i)` that actually constrain `(a, b)`:
    /// those with `A_i = B_i = 0` and `L_i ≤ tol` are skipped.
    pub fn rows(&self, tol: S) -> impl Iterator<Item = (S, S, S)> + '_ {
        self.base_gap
            .iter()
            .zip(self.displacement.iter())
            .zip(self.image_gap.iter())
            .map(|((&a, &b), &l)| (a, b, l))
            .filter(move |&(a, b, l)| !(a.is_zero() && b.is_zero() && l <= tol))
    }

    /// Some coordinate has `A_i = B_i = 0 < L_i - tol`; no `(a, b)` satisfies it.
    pub fn is_degenerate(&self, tol: S) -> bool {
        self.rows(tol)
            .any(|(a, b, l)| a.is_zero() && b.is_zero() && l > tol)
    }
}

/// Deterministic pair sample over `[lo, hi]`: the endpoint pair, near-coincident
/// pairs at both endpoints, grid points paired with each endpoint,
/// near-coincident pairs at seeded random centres, then seeded uniform pairs.
/// Pairs with `x = y` are skipped; the stream is truncated to `count`.
pub fn sample_pairs<S: Scalar>(lo: S, hi: S, count: usize, seed: u64) -> Vec<(S, S)> {
    let width = hi - lo;
    if !(width > S::zero()) {
        return Vec::new();
    }
    let mut rng = sampling::rng(seed);
    let mut pairs = vec![(lo, hi)];
    for &g in &NEAR_GAPS {
        let gap = width * S::lit(g);
        pairs.push((lo, lo + gap));
        pairs.push((hi - gap, hi));
    }
    let grid = crate::cone_space::PointDomain::interval(lo, hi).grid(CHECK_GRID_POINTS);
    for &g in &grid[1..grid.len() - 1] {
        pairs.push((lo, g));
        pairs.push((g, hi));
    }
    for &g in &NEAR_GAPS {
        let gap = width * S::lit(g);
        for _ in 0..NEAR_CENTRES {
            let c = sampling::uniform(&mut rng, lo, hi - gap);
            pairs.push((c, c + gap));
        }
    }
    pairs.retain(|(x, y)| x != y);
    pairs.truncate(count);
    while pairs.len() < count {
        let x = sampling::uniform(&mut rng, lo, hi);
        let y = sampling::uniform(&mut rng, lo, hi);
        if x != y {
            pairs.push((x, y));
        }
    }
    pairs
}

/// Evaluates the class inequality's three cone vectors at one pair.
pub fn pair_constraint<S: Scalar>(pair: &MappingPair<S>, x: S, y: S) -> Result<PairConstraint<S>> {
    let (tx, ty) = (pair.apply_t(x)?, pair.apply_t(y)?);
    let (tsx, tsy) = (
        pair.apply_t(pair.apply_s(x)?)?,
        pair.apply_t(pair.apply_s(y)?)?,
    );
    let space = &pair.space;
    Ok(PairConstraint {
        image_gap: space.distance(tsx, tsy)?,
        base_gap: space.distance(tx, ty)?,
        displacement: space.distance(tx, tsx)?.add(&space.distance(ty, tsy)?)?,
        witness: (x, y),
    })
}

/// Samples `sample_count` pairs and evaluates their constraints.
pub fn build_constraints<S: Scalar>(
    pair: &MappingPair<S>,
    sample_count: usize,
    seed: u64,
) -> Result<Vec<PairConstraint<S>>> {
    if sample_count == 0 {
        return Err(Error::NoSamples);
    }
    let domain = pair.domain();
    domain.ensure_nonempty()?;
    sample_pairs(domain.lo, domain.hi, sample_count, seed)
        .into_iter()
        .map(|(x, y)| pair_constraint(pair, x, y))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateStatus {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Witness<S: Scalar> {
    pub pair: (S, S),
    pub residual: S,
}

/// Result of testing one `(a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Certificate<S: Scalar> {
    pub status: CertificateStatus,
    pub ab: (S, S),
    /// Largest scaled residual over all pairs and coordinates (0 if no pairs).
    pub worst_residual: S,
    /// Up to [`MAX_WITNESSES`] violating pairs, largest residual first.
    pub witnesses: Vec<Witness<S>>,
    pub samples_used: usize,
    pub seed: u64,
}

impl<S: Scalar> Certificate<S> {
    pub fn is_satisfied(&self) -> bool {
        self.status == CertificateStatus::Satisfied
    }
}

fn check_coefficients<S: Scalar>(a: S, b: S) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a >= S::zero() && b >= S::zero()) {
        return Err(Error::NegativeCoefficient {
            a: a.as_f64(),
            b: b.as_f64(),
        });
    }
    Ok(())
}

/// Certifies `(a, b)` against an already built constraint set.
pub fn certify_constraints<S: Scalar>(
    constraints: &[PairConstraint<S>],
    a: S,
    b: S,
    seed: u64,
) -> Result<Certificate<S>> {
    check_coefficients(a, b)?;
    let tol = S::lit(CERTIFY_TOLERANCE);
    let mut worst = if constraints.is_empty() {
        S::zero()
    } else {
        S::neg_infinity()
    };
    let mut violations = Vec::new();
    for c in constraints {
        let r = c.residual(a, b);
        worst = worst.max(r);
        if r > tol {
            violations.push(Witness {
                pair: c.witness,
                residual: r,
            });
        }
    }
    violations.sort_by(|l, r| {
        r.residual
            .partial_cmp(&l.residual)
            .unwrap()
            .then(l.pair.0.partial_cmp(&r.pair.0).unwrap())
            .then(l.pair.1.partial_cmp(&r.pair.1).unwrap())
    });
    violations.truncate(MAX_WITNESSES);
    Ok(Certificate {
        status: if worst <= tol {
            CertificateStatus::Satisfied
        } else {
            CertificateStatus::Violated
        },
        ab: (a, b),
        worst_residual: worst,
        witnesses: violations,
        samples_used: constraints.len(),
        seed,
    })
}

/// Tests whether `pair` satisfies the class inequality with constants `(a, b)`
/// on a seeded sample of pairs.
pub fn certify<S: Scalar>(
    pair: &MappingPair<S>,
    a: S,
    b: S,
    sample_count: usize,
    seed: u64,
) -> Result<Certificate<S>> {
    check_coefficients(a, b)?;
    let constraints = build_constraints(pair, sample_count, seed)?;
    certify_constraints(&constraints, a, b, seed)
}

/// Minimal `a + 2b` over the sampled feasible region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FitResult<S: Scalar> {
    pub feasible: bool,
    /// `None` when infeasible.
    pub argmin: Option<(S, S)>,
    pub objective: Option<S>,
    /// Constraints binding at the argmin (at most [`MAX_ACTIVE`]).
    pub active_constraints: Vec<PairConstraint<S>>,
    /// Pair with `A_i = B_i = 0 < L_i` when infeasible.
    pub infeasible_witness: Option<(S, S)>,
    pub samples_used: usize,
    pub seed: u64,
}

impl<S: Scalar> FitResult<S> {
    /// Whether the fitted constants meet the `a + 2b < 1` hypothesis.
    pub fn theorem_applies(&self) -> bool {
        self.objective.is_some_and(|o| o < S::one())
    }
}

/// Fits `(a, b)` to an already built constraint set.
pub fn fit_constraints<S: Scalar>(constraints: &[PairConstraint<S>], seed: u64) -> FitResult<S> {
    let tol = S::lit(DEFAULT_TOLERANCE);
    let rows: Vec<HalfPlane<S>> = constraints
        .iter()
        .enumerate()
        .flat_map(|(source, c)| {
            c.rows(tol).map(move |(a_coef, b_coef, rhs)| HalfPlane {
                a_coef,
                b_coef,
                rhs,
                source,
            })
        })
        .collect();
    match lp::minimize_a_plus_2b(&rows, tol) {
        LpSolution::Infeasible { source } => FitResult {
            feasible: false,
            argmin: None,
            objective: None,
            active_constraints: vec![constraints[source].clone()],
            infeasible_witness: Some(constraints[source].witness),
            samples_used: constraints.len(),
            seed,
        },
        LpSolution::Optimal { a, b, objective } => {
            let binding = S::lit(CERTIFY_TOLERANCE);
            let mut active: Vec<_> = constraints
                .iter()
                .filter(|c| c.residual(a, b) >= -binding)
                .cloned()
                .collect();
            active.sort_by(|l, r| {
                l.witness
                    .0
                    .partial_cmp(&r.witness.0)
                    .unwrap()
                    .then(l.witness.1.partial_cmp(&r.witness.1).unwrap())
            });
            active.truncate(MAX_ACTIVE);
            FitResult {
                feasible: true,
                argmin: Some((a, b)),
                objective: Some(objective),
                active_constraints: active,
                infeasible_witness: None,
                samples_used: constraints.len(),
                seed,
            }
        }
    }
}

/// Solves `min a + 2b` subject to `a·A_i + b·B_i ≥ L_i` over a seeded sample.
pub fn fit_min_ab<S: Scalar>(
    pair: &MappingPair<S>,
    sample_count: usize,
    seed: u64,
) -> Result<FitResult<S>> {
    let constraints = build_constraints(pair, sample_count, seed)?;
    Ok(fit_constraints(&constraints, seed))
}
