use std::fmt::{Debug, Display};

use num_traits::Float;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar used for points of `M` and coordinates of `E`.
///
/// Blanket-implemented for every float type with the listed capabilities,
/// which covers `f32`, `f64` and double-double types such as `twofloat`.
pub trait Scalar:
    Float + Debug + Display + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// Converts an `f64` literal. Panics only if the type cannot represent
    /// ordinary finite constants, which no float type does.
    fn lit(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("float literal must convert")
    }

    /// Lossy conversion used for reporting and sampling.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + Debug + Display + Send + Sync + Serialize + DeserializeOwned + 'static
{
}
