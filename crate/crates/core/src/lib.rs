//! Cone metric spaces over finite-dimensional ordered vector spaces, empirical
//! certification of the contraction class `D_T(a, b)`, and Picard iteration with
//! the rate and error bounds that class guarantees.
//!
//! A mapping `S` on a cone metric space `(M, d)` belongs to `D_T(a, b)` for a
//! continuous injective `T` when
//!
//! ```text
//! d(TSx, TSy) <= a d(Tx, Ty) + b [d(Tx, TSx) + d(Ty, TSy)]   for all x, y in M
//! ```
//!
//! under the partial order induced by the cone. When `a + 2b < 1` the Picard
//! iterates `x_{n+1} = S x_n` have T-images that contract geometrically with
//! ratio `lambda = (a + b) / (1 - b)`.
//!
//! The crate is organised as:
//!
//! * [`cone_space`]: vectors of `E`, orthant cones, norms, cone metric spaces
//!   and sampled axiom checks.
//! * [`mappings`]: the specimen registry of `(M, S, T)` triples.
//! * [`classes`]: constraint sampling, certification and minimal `(a, b)` fitting.
//! * [`solver`]: Picard iteration, rate bound checks, uniqueness and continuity
//!   diagnostics.
//!
//! Everything is generic over a [`Scalar`]; `f64` aliases are exported at the
//! crate root.

// `!(x > 0)` style guards are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classes;
pub mod cone_space;
mod error;
pub mod mappings;
mod sampling;
mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Cone vector with `f64` coordinates.
pub type EVector64 = cone_space::EVector<f64>;
/// Orthant cone over `f64`.
pub type Cone64 = cone_space::Cone<f64>;
/// Norm specification over `f64`.
pub type NormSpec64 = cone_space::NormSpec<f64>;
/// Point domain over `f64`.
pub type PointDomain64 = cone_space::PointDomain<f64>;
/// Cone metric space over `f64`.
pub type ConeMetricSpace64 = cone_space::ConeMetricSpace<f64>;
/// Mapping pair over `f64`.
pub type MappingPair64 = mappings::MappingPair<f64>;
/// Corpus entry over `f64`.
pub type CorpusEntry64 = mappings::CorpusEntry<f64>;
/// Certificate over `f64`.
pub type Certificate64 = classes::Certificate<f64>;
/// Fit result over `f64`.
pub type FitResult64 = classes::FitResult<f64>;
/// Iteration trace over `f64`.
pub type IterationTrace64 = solver::IterationTrace<f64>;
/// Fixed point result over `f64`.
pub type FixedPointResult64 = solver::FixedPointResult<f64>;

/// Cone vector with `f32` coordinates.
pub type EVector32 = cone_space::EVector<f32>;
/// Cone metric space over `f32`.
pub type ConeMetricSpace32 = cone_space::ConeMetricSpace<f32>;
/// Mapping pair over `f32`.
pub type MappingPair32 = mappings::MappingPair<f32>;
