//! Scalar abstraction for genome and fitness values.

use std::fmt::Debug;

use num_traits::Float;
use rand::distr::uniform::SampleUniform;

/// Floating-point scalar for genomes and fitness: `f32` or `f64`.
pub trait Real: Float + SampleUniform + Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + SampleUniform + Debug + Send + Sync + 'static {}

/// Converts an `f64` constant into the active scalar type.
pub(crate) fn real<T: Real>(v: f64) -> T {
    T::from(v).expect("constant not representable in scalar type")
}
