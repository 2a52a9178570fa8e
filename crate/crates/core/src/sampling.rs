use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Scalar;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw on `[lo, hi]`, drawn in `f64` so every scalar type sees the
/// same sample stream for a given seed.
pub(crate) fn uniform<S: Scalar>(rng: &mut ChaCha8Rng, lo: S, hi: S) -> S {
    let (lo, hi) = (lo.as_f64(), hi.as_f64());
    if hi <= lo {
        return S::lit(lo);
    }
    S::lit(rng.gen_range(lo..=hi))
}

pub(crate) fn unit<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    S::lit(rng.gen::<f64>())
}
