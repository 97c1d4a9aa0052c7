use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::scalar::{dot, norm, Real};

/// Affine function `h(Z) = <Z, c> + b`; as a hyperplane it is `{h = 0}`, as
/// a polytope inequality it means `h(Z) <= 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane<T> {
    pub c: Vec<T>,
    pub b: T,
}

/// One `+1`/`-1` entry per hyperplane: the sign of `h_t` on a cell interior.
pub type SignVector = Vec<i8>;

impl<T: Real> Hyperplane<T> {
    pub fn new(c: Vec<T>, b: T) -> Result<Self, GeometryError> {
        if c.iter().any(|v| !v.is_finite()) || !b.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if norm(&c) == T::zero() {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Self { c, b })
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    #[inline]
    pub fn eval(&self, z: &[T]) -> T {
        dot(&self.c, z) + self.b
    }

    /// Sign of `h(z)`, or `None` within `tol` of the hyperplane.
    pub fn side(&self, z: &[T], tol: T) -> Option<i8> {
        let v = self.eval(z);
        if v > tol {
            Some(1)
        } else if v < -tol {
            Some(-1)
        } else {
            None
        }
    }

    /// Same hyperplane scaled so that `||c|| + |b| = 1`.
    pub fn normalized(&self) -> Self {
        let s = norm(&self.c) + self.b.abs();
        self.scaled(T::one() / s)
    }

    pub fn scaled(&self, gamma: T) -> Self {
        Self {
            c: self.c.iter().map(|&v| v * gamma).collect(),
            b: self.b * gamma,
        }
    }

    /// The opposite half-space `-h(Z) <= 0`.
    pub fn flipped(&self) -> Self {
        self.scaled(-T::one())
    }

    /// Scale so that `||c|| = 1`.
    pub fn unit(&self) -> Self {
        self.scaled(T::one() / norm(&self.c))
    }
}

/// Signs of all hyperplanes at `z`; `None` if `z` is within `tol` of any.
pub fn sign_vector<T: Real>(hyperplanes: &[Hyperplane<T>], z: &[T], tol: T) -> Option<SignVector> {
    hyperplanes.iter().map(|h| h.side(z, tol)).collect()
}
