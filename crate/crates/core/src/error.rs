use thiserror::Error;

/// Errors raised by the cone-space, class and solver operations.
///
/// Points and coefficients are carried as `f64` so the error type stays
/// independent of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    #[error("point domain [{lo}, {hi}] is empty")]
    EmptyDomain { lo: f64, hi: f64 },

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("specimen {specimen}: {map}({point}) = {image} leaves {target}")]
    OutOfDomain {
        specimen: String,
        map: &'static str,
        point: f64,
        image: f64,
        target: &'static str,
    },

    #[error("specimen {specimen}: point {point} is outside the domain")]
    PointOutsideDomain { specimen: String, point: f64 },

    #[error("coefficients must be finite and non-negative, got a = {a}, b = {b}")]
    NegativeCoefficient { a: f64, b: f64 },

    #[error("theorem hypothesis violated: {reason} (a = {a}, b = {b})")]
    HypothesisViolated {
        a: f64,
        b: f64,
        reason: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("trace has {steps} steps, at least {required} required")]
    TraceTooShort { steps: usize, required: usize },

    #[error("unknown specimen {label}; available: {available}")]
    UnknownSpecimen { label: String, available: String },

    #[error("solve from x0 = {x0} failed: {source}")]
    SolveFailed {
        x0: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
