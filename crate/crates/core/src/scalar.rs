//! Scalar abstraction shared by the numerical kernel, the geometry and the
//! calibration engines.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar: `f32` or `f64`.
///
/// The tolerances are tied to the precision of the type; every feasibility
/// or membership predicate in the crate goes through them.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Feasibility / membership tolerance.
    fn feas_tol() -> Self;

    /// Smallest magnitude accepted as a simplex pivot.
    fn pivot_tol() -> Self;

    /// Converts an `f64` literal. Never fails for the provided impls.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable literal")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn feas_tol() -> Self {
        1e-9
    }
    #[inline]
    fn pivot_tol() -> Self {
        1e-11
    }
}

impl Real for f32 {
    #[inline]
    fn feas_tol() -> Self {
        2e-4
    }
    #[inline]
    fn pivot_tol() -> Self {
        1e-6
    }
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub(crate) fn dist_sq<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
}

pub(crate) fn uniform<T: Real>(n: usize) -> Vec<T> {
    if n == 0 {
        return Vec::new();
    }
    let w = T::one() / T::from_usize(n).unwrap();
    vec![w; n]
}
