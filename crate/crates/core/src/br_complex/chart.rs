use serde::{Deserialize, Serialize};

use crate::numerics::linalg::orthonormal_basis;
use crate::scalar::dot;

/// Affine coordinates on a subspace of an ambient space:
/// `to_chart(p) = A (p - origin)` and `lift(z) = origin + B z`, with `A B = I`.
///
/// A chart of dimension zero (a single point) still exposes one coordinate,
/// always zero, so that downstream geometry has `dim >= 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub origin: Vec<f64>,
    /// Columns of `B`, one per chart coordinate.
    pub basis: Vec<Vec<f64>>,
    /// Rows of `A`.
    pub coords: Vec<Vec<f64>>,
}

impl Chart {
    /// Probability simplex `Delta(n)` with coordinate 0 dropped: a point is
    /// described by its last `n - 1` entries.
    pub fn simplex(n: usize) -> Self {
        let mut origin = vec![0.0; n];
        origin[0] = 1.0;
        let basis = (1..n)
            .map(|k| {
                let mut v = vec![0.0; n];
                v[0] = -1.0;
                v[k] = 1.0;
                v
            })
            .collect();
        let coords = (1..n)
            .map(|k| {
                let mut v = vec![0.0; n];
                v[k] = 1.0;
                v
            })
            .collect();
        Self {
            origin,
            basis,
            coords,
        }
    }

    /// Orthonormal chart of the affine hull of `points`.
    pub fn affine_hull(points: &[Vec<f64>]) -> Self {
        let origin = points[0].clone();
        let diffs: Vec<Vec<f64>> = points[1..]
            .iter()
            .map(|p| p.iter().zip(&origin).map(|(a, b)| a - b).collect())
            .collect();
        let basis = orthonormal_basis(&diffs);
        Self {
            origin,
            coords: basis.clone(),
            basis,
        }
    }

    /// Intrinsic dimension (may be zero).
    pub fn intrinsic_dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of chart coordinates (at least one).
    pub fn dim(&self) -> usize {
        self.basis.len().max(1)
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    pub fn to_chart(&self, p: &[f64]) -> Vec<f64> {
        if self.basis.is_empty() {
            return vec![0.0];
        }
        let d: Vec<f64> = p.iter().zip(&self.origin).map(|(a, b)| a - b).collect();
        self.coords.iter().map(|a| dot(a, &d)).collect()
    }

    pub fn lift(&self, z: &[f64]) -> Vec<f64> {
        let mut p = self.origin.clone();
        for (b, &zk) in self.basis.iter().zip(z) {
            for (pi, &bi) in p.iter_mut().zip(b) {
                *pi += zk * bi;
            }
        }
        p
    }
}
