use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Polytope};
use crate::scalar::Real;

/// Finite family of polytopes covering `domain` with pairwise
/// interior-disjoint members, each carrying a label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopialComplex<T, L> {
    pub domain: Polytope<T>,
    pub cells: Vec<Polytope<T>>,
    pub labels: Vec<L>,
}

/// Outcome of the structural checks of a complex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComplexCheck<T> {
    /// Sampled domain points lying in no cell.
    pub uncovered: Vec<Vec<T>>,
    /// Pairs of cells whose intersection has nonempty interior.
    pub overlapping: Vec<(usize, usize)>,
}

impl<T: Real, L> PolytopialComplex<T, L> {
    pub fn new(
        domain: Polytope<T>,
        cells: Vec<Polytope<T>>,
        labels: Vec<L>,
    ) -> Result<Self, GeometryError> {
        if cells.len() != labels.len() || cells.is_empty() {
            return Err(GeometryError::DimensionMismatch(format!(
                "{} cells and {} labels",
                cells.len(),
                labels.len()
            )));
        }
        if cells.iter().any(|c| c.dim != domain.dim) {
            return Err(GeometryError::DimensionMismatch(
                "cell and domain dimensions differ".into(),
            ));
        }
        Ok(Self {
            domain,
            cells,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    /// Lowest-index cell containing `z` (within `tol`).
    pub fn locate(&self, z: &[T], tol: T) -> Option<usize> {
        self.cells.iter().position(|c| c.contains(z, tol))
    }

    /// Pairs of cells with a common interior point (Chebyshev LP).
    pub fn overlaps(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in a + 1..self.len() {
                let inter = self.cells[a].intersect(&self.cells[b]);
                if inter.has_interior(T::feas_tol() * T::lit(10.0)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Sampling-based coverage check plus the overlap LPs.
    pub fn check<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        samples: usize,
    ) -> Result<ComplexCheck<T>, GeometryError> {
        let pts = self.domain.sample(rng, samples)?;
        let uncovered = pts
            .into_iter()
            .filter(|z| self.locate(z, T::feas_tol()).is_none())
            .collect();
        Ok(ComplexCheck {
            uncovered,
            overlapping: self.overlaps(),
        })
    }
}
