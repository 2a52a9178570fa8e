//! Specimen registry: mapping pairs `(M, S, T)` with their declared analytic
//! properties and the outcomes expected of them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cone_space::{ConeMetricSpace, PointDomain, DEFAULT_EXP_GRID};
use crate::{Error, Result, Scalar};

/// Absolute tolerance for inclusive domain membership.
pub const DOMAIN_TOLERANCE: f64 = 1e-12;

/// Self-map on points of `M`.
pub type PointMap<S> = Arc<dyn Fn(S) -> S + Send + Sync>;

/// Analytic properties a specimen declares about `S` and `T`. They are
/// stated, not proven; sampled sanity checks cover what can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredProperties {
    pub t_injective: bool,
    pub t_continuous: bool,
    pub t_sequentially_convergent: bool,
    pub t_subsequentially_convergent: bool,
    pub s_continuous: bool,
}

impl DeclaredProperties {
    /// `T` is a homeomorphism onto its image; `S` continuous.
    pub const REGULAR: Self = Self {
        t_injective: true,
        t_continuous: true,
        t_sequentially_convergent: true,
        t_subsequentially_convergent: true,
        s_continuous: true,
    };
}

/// A specimen `(M, S, T)` over a cone metric space.
///
/// `T` may leave `M` (the classic examples use `T x = 2x` on `[0, 1]` and
/// `T x = ln x` on `[1/2, 1]`), so it carries its own codomain; the metric
/// is evaluated on both.
#[derive(Clone)]
pub struct MappingPair<S: Scalar> {
    pub label: String,
    pub space: ConeMetricSpace<S>,
    pub t_codomain: PointDomain<S>,
    pub declared: DeclaredProperties,
    pub t_is_identity: bool,
    s_map: PointMap<S>,
    t_map: PointMap<S>,
}

impl<S: Scalar> fmt::Debug for MappingPair<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MappingPair")
            .field("label", &self.label)
            .field("space", &self.space)
            .field("t_codomain", &self.t_codomain)
            .field("declared", &self.declared)
            .finish_non_exhaustive()
    }
}

impl<S: Scalar> MappingPair<S> {
    pub fn new(
        label: impl Into<String>,
        space: ConeMetricSpace<S>,
        s_map: PointMap<S>,
        t_map: PointMap<S>,
        t_codomain: PointDomain<S>,
        declared: DeclaredProperties,
    ) -> Self {
        Self {
            label: label.into(),
            space,
            t_codomain,
            declared,
            t_is_identity: false,
            s_map,
            t_map,
        }
    }

    /// Pair with `T = id`, whose codomain is `M` itself.
    pub fn with_identity_t(
        label: impl Into<String>,
        space: ConeMetricSpace<S>,
        s_map: PointMap<S>,
    ) -> Self {
        let domain = space.domain;
        let mut pair = Self::new(
            label,
            space,
            s_map,
            Arc::new(|x| x),
            domain,
            DeclaredProperties::REGULAR,
        );
        pair.t_is_identity = true;
        pair
    }

    pub fn domain(&self) -> PointDomain<S> {
        self.space.domain
    }

    fn tol() -> S {
        S::lit(DOMAIN_TOLERANCE)
    }

    pub fn contains(&self, x: S) -> bool {
        self.space.domain.contains(x, Self::tol())
    }

    pub(crate) fn ensure_in_domain(&self, x: S) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutsideDomain {
                specimen: self.label.clone(),
                point: x.as_f64(),
            })
        }
    }

    /// `S x`, erroring if `x ∉ M` or `S x ∉ M`. Images are never clamped.
    pub fn apply_s(&self, x: S) -> Result<S> {
        self.ensure_in_domain(x)?;
        let image = (self.s_map)(x);
        if !self.contains(image) {
            return Err(Error::OutOfDomain {
                specimen: self.label.clone(),
                map: "S",
                point: x.as_f64(),
                image: image.as_f64(),
                target: "the domain M",
            });
        }
        Ok(image)
    }

    /// `T x`, erroring if `x ∉ M` or `T x` leaves the declared codomain.
    pub fn apply_t(&self, x: S) -> Result<S> {
        self.ensure_in_domain(x)?;
        let image = (self.t_map)(x);
        if !self.t_codomain.contains(image, Self::tol()) {
            return Err(Error::OutOfDomain {
                specimen: self.label.clone(),
                map: "T",
                point: x.as_f64(),
                image: image.as_f64(),
                target: "the codomain of T",
            });
        }
        Ok(image)
    }
}

/// Free-function form of [`MappingPair::apply_s`].
pub fn apply_s<S: Scalar>(pair: &MappingPair<S>, x: S) -> Result<S> {
    pair.apply_s(x)
}

/// Free-function form of [`MappingPair::apply_t`].
pub fn apply_t<S: Scalar>(pair: &MappingPair<S>, x: S) -> Result<S> {
    pair.apply_t(x)
}

/// What the specimen's membership region is expected to look like.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub enum FeasibleRegion<S: Scalar> {
    /// The pair belongs to `D_T(a, b)` for these constants.
    Contains { a: S, b: S },
    /// No `(a, b)` with `a + 2b < 1` works.
    NoneBelowOne,
}

/// Column of the corollary table a specimen illustrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `a, b ≥ 0`, `a + 2b < 1`.
    General,
    /// `a = 0`, `b ∈ [0, 1/2)`.
    Kannan,
    /// `b = 0`, `a < 1`.
    Banach,
}

impl Regime {
    pub fn classify<S: Scalar>(a: S, b: S) -> Self {
        if b.is_zero() {
            Self::Banach
        } else if a.is_zero() {
            Self::Kannan
        } else {
            Self::General
        }
    }

    pub fn column(self) -> &'static str {
        match self {
            Self::General => "a,b>=0",
            Self::Kannan => "a=0, b in [0,1/2)",
            Self::Banach => "b=0, a<1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ExpectedOutcome<S: Scalar> {
    pub feasible_ab: FeasibleRegion<S>,
    pub fixed_point: Option<S>,
    pub min_a_plus_2b: Option<S>,
}

/// A specimen plus its expected outcome and a default starting point.
#[derive(Debug, Clone)]
pub struct CorpusEntry<S: Scalar> {
    pub pair: MappingPair<S>,
    pub expected: ExpectedOutcome<S>,
    pub default_x0: S,
    pub description: &'static str,
}

impl<S: Scalar> CorpusEntry<S> {
    pub fn label(&self) -> &str {
        &self.pair.label
    }
}

/// Constant used for `α` in the `T x = αx` and ℝ² examples. Membership in
/// both is independent of `α` because it scales every term alike.
pub const ALPHA: f64 = 2.0;

fn unit_interval<S: Scalar>() -> PointDomain<S> {
    PointDomain::interval(S::zero(), S::one())
}

fn map<S: Scalar>(f: impl Fn(S) -> S + Send + Sync + 'static) -> PointMap<S> {
    Arc::new(f)
}

/// `S x = √x`, `T x = αx` on `[0, 1]` with the `e^t` metric. Not in the
/// class for any `a + 2b < 1`.
pub fn example_scaled_sqrt<S: Scalar>() -> CorpusEntry<S> {
    let alpha = S::lit(ALPHA);
    let domain = unit_interval();
    let space = ConeMetricSpace::exp_weighted("E1", domain, DEFAULT_EXP_GRID);
    let pair = MappingPair::new(
        "E1",
        space,
        map(S::sqrt),
        map(move |x| alpha * x),
        PointDomain::interval(S::zero(), alpha),
        DeclaredProperties::REGULAR,
    );
    CorpusEntry {
        pair,
        expected: ExpectedOutcome {
            feasible_ab: FeasibleRegion::NoneBelowOne,
            fixed_point: None,
            min_a_plus_2b: None,
        },
        default_x0: S::lit(0.5),
        description: "S = sqrt(x), T = 2x on [0,1], d = |x-y| e^t",
    }
}

/// `S x = √x`, `T x = ln x` on `[1/2, 1]` with the `e^t` metric. In
/// `D_T(1/2, 0)` with fixed point 1.
pub fn example_log_sqrt<S: Scalar>() -> CorpusEntry<S> {
    let domain = PointDomain::interval(S::lit(0.5), S::one());
    let space = ConeMetricSpace::exp_weighted("E2", domain, DEFAULT_EXP_GRID);
    let pair = MappingPair::new(
        "E2",
        space,
        map(S::sqrt),
        map(S::ln),
        PointDomain::interval(-S::lit(2.0).ln(), S::zero()),
        DeclaredProperties::REGULAR,
    );
    CorpusEntry {
        pair,
        expected: ExpectedOutcome {
            feasible_ab: FeasibleRegion::Contains {
                a: S::lit(0.5),
                b: S::zero(),
            },
            fixed_point: Some(S::one()),
            min_a_plus_2b: Some(S::lit(0.5)),
        },
        default_x0: S::lit(0.5),
        description: "S = sqrt(x), T = ln(x) on [1/2,1], d = |x-y| e^t",
    }
}

/// `S = id`, `T x = √x` on `[0, 1]`. Every point is fixed, and the class
/// inequality forces `a ≥ 1`.
pub fn example_identity_sqrt<S: Scalar>() -> CorpusEntry<S> {
    let domain = unit_interval();
    let space = ConeMetricSpace::exp_weighted("E3", domain, DEFAULT_EXP_GRID);
    let pair = MappingPair::new(
        "E3",
        space,
        map(|x| x),
        map(S::sqrt),
        unit_interval(),
        DeclaredProperties::REGULAR,
    );
    CorpusEntry {
        pair,
        expected: ExpectedOutcome {
            feasible_ab: FeasibleRegion::NoneBelowOne,
            fixed_point: None,
            min_a_plus_2b: Some(S::one()),
        },
        default_x0: S::lit(0.5),
        description: "S = id, T = sqrt(x) on [0,1], d = |x-y| e^t",
    }
}

/// Banach contraction `S x = x/2` on `[0, 1]` with `T = id`.
pub fn corollary_banach<S: Scalar>() -> CorpusEntry<S> {
    let half = S::lit(0.5);
    let space = ConeMetricSpace::absolute("C-Banach", unit_interval());
    let pair = MappingPair::with_identity_t("C-Banach", space, map(move |x| x * half));
    CorpusEntry {
        pair,
        expected: ExpectedOutcome {
            feasible_ab: FeasibleRegion::Contains {
                a: half,
                b: S::zero(),
            },
            fixed_point: Some(S::zero()),
            min_a_plus_2b: Some(half),
        },
        default_x0: S::one(),
        description: "S = x/2, T = id on [0,1], d = |x-y|",
    }
}

/// Kannan map `S x = x/4` on `[0, 1)`, `S 1 = 1/8`, `T = id`. Discontinuous
/// at 1, so no Banach constant exists; pairs `(0, y)` make `b = 1/3` sharp
/// when `a = 0`.
pub fn corollary_kannan<S: Scalar>() -> CorpusEntry<S> {
    let quarter = S::lit(0.25);
    let eighth = S::lit(0.125);
    let space = ConeMetricSpace::absolute("C-Kannan", unit_interval());
    let s = map(move |x: S| if x < S::one() { x * quarter } else { eighth });
    let mut pair = MappingPair::with_identity_t("C-Kannan", space, s);
    pair.declared.s_continuous = false;
    CorpusEntry {
        pair,
        expected: ExpectedOutcome {
            feasible_ab: FeasibleRegion::Contains {
                a: S::zero(),
                b: S::one() / S::lit(3.0),
            },
            fixed_point: Some(S::zero()),
            min_a_plus_2b: None,
        },
        default_x0: S::one(),
        description: "S = x/4 (x<1), 1/8 (x=1), T = id on [0,1], d = |x-y|",
    }
}

/// Banach contraction on `[0, 1]` under `d(x, y) = (|x-y|, α|x-y|) ∈ ℝ²`.
pub fn corollary_planar<S: Scalar>() -> CorpusEntry<S> {
    let half = S::lit(0.5);
    let space = ConeMetricSpace::planar("C-R2", unit_interval(), S::lit(ALPHA));
    let pair = MappingPair::with_identity_t("C-R2", space, map(move |x| x * half));
    CorpusEntry {
        pair,
        expected: ExpectedOutcome {
            feasible_ab: FeasibleRegion::Contains {
                a: half,
                b: S::zero(),
            },
            fixed_point: Some(S::zero()),
            min_a_plus_2b: Some(half),
        },
        default_x0: S::one(),
        description: "S = x/2, T = id on [0,1], d = (|x-y|, 2|x-y|)",
    }
}

/// Every built-in specimen.
pub fn corpus<S: Scalar>() -> Vec<CorpusEntry<S>> {
    vec![
        example_scaled_sqrt(),
        example_log_sqrt(),
        example_identity_sqrt(),
        corollary_banach(),
        corollary_kannan(),
        corollary_planar(),
    ]
}

pub fn labels() -> Vec<&'static str> {
    vec!["E1", "E2", "E3", "C-Banach", "C-Kannan", "C-R2"]
}

/// Looks a specimen up by label.
pub fn find<S: Scalar>(label: &str) -> Result<CorpusEntry<S>> {
    corpus()
        .into_iter()
        .find(|e| e.label() == label)
        .ok_or_else(|| Error::UnknownSpecimen {
            label: label.to_string(),
            available: labels().join(", "),
        })
}

/// One line of the exported specimen manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub label: String,
    pub description: String,
    pub domain: PointDomain<f64>,
    pub t_codomain: PointDomain<f64>,
    pub e_dim: usize,
    pub t_is_identity: bool,
    pub declared: DeclaredProperties,
}

pub fn manifest() -> Vec<ManifestEntry> {
    corpus::<f64>()
        .into_iter()
        .map(|e| ManifestEntry {
            label: e.pair.label.clone(),
            description: e.description.to_string(),
            domain: e.pair.domain(),
            t_codomain: e.pair.t_codomain,
            e_dim: e.pair.space.e_dim(),
            t_is_identity: e.pair.t_is_identity,
            declared: e.pair.declared,
        })
        .collect()
}
