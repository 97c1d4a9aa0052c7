use serde::{Deserialize, Serialize};

use super::{GeometryError, Hyperplane, Polytope, SignVector};
use crate::numerics::linalg::binomial;
use crate::scalar::Real;

/// Full-dimensional cell of an arrangement restricted to a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrangementCell<T> {
    pub signs: SignVector,
    pub polytope: Polytope<T>,
    /// Chebyshev center of the cell (an interior point).
    pub center: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrangement<T> {
    pub hyperplanes: Vec<Hyperplane<T>>,
    pub domain: Polytope<T>,
    pub cells: Vec<ArrangementCell<T>>,
}

impl<T: Real> Arrangement<T> {
    /// Index of the cell whose sign vector matches `z`, if `z` is off every
    /// hyperplane (by more than `tol`) and inside the domain.
    pub fn locate(&self, z: &[T], tol: T) -> Option<usize> {
        if !self.domain.contains(z, tol) {
            return None;
        }
        let s = super::sign_vector(&self.hyperplanes, z, tol)?;
        self.cells.iter().position(|c| c.signs == s)
    }

    pub fn sign_vectors(&self) -> Vec<SignVector> {
        self.cells.iter().map(|c| c.signs.clone()).collect()
    }
}

/// Enumerates the full-dimensional cells cut out of `domain` by `hyperplanes`.
///
/// Cells are split one hyperplane at a time; a side survives when its
/// Chebyshev radius exceeds the feasibility tolerance. Hyperplanes that do
/// not cut a cell only extend its sign vector.
pub fn arrangement_cells<T: Real>(
    hyperplanes: &[Hyperplane<T>],
    domain: &Polytope<T>,
) -> Result<Arrangement<T>, GeometryError> {
    for h in hyperplanes {
        if h.dim() != domain.dim {
            return Err(GeometryError::DimensionMismatch(format!(
                "hyperplane of dimension {} for domain of dimension {}",
                h.dim(),
                domain.dim
            )));
        }
    }
    let ball = domain.chebyshev().map_err(|e| match e {
        GeometryError::Infeasible => GeometryError::DomainEmpty,
        e => e,
    })?;
    let tol = T::feas_tol();
    if ball.radius <= tol {
        return Err(GeometryError::DomainEmpty);
    }
    let mut cells = vec![ArrangementCell {
        signs: Vec::new(),
        polytope: domain.clone(),
        center: ball.center,
    }];
    for h in hyperplanes {
        let unit = h.unit();
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in cells {
            let neg = cell.polytope.clone().with_inequality(unit.clone());
            let pos = cell.polytope.clone().with_inequality(unit.flipped());
            let bn = neg.chebyshev().ok().filter(|b| b.radius > tol);
            let bp = pos.chebyshev().ok().filter(|b| b.radius > tol);
            match (bn, bp) {
                (Some(bn), Some(bp)) => {
                    let mut sn = cell.signs.clone();
                    sn.push(-1);
                    next.push(ArrangementCell {
                        signs: sn,
                        polytope: neg,
                        center: bn.center,
                    });
                    let mut sp = cell.signs;
                    sp.push(1);
                    next.push(ArrangementCell {
                        signs: sp,
                        polytope: pos,
                        center: bp.center,
                    });
                }
                _ => {
                    // Not cut: the whole cell lies on the side of its center.
                    let mut s = cell.signs;
                    s.push(if unit.eval(&cell.center) > T::zero() {
                        1
                    } else {
                        -1
                    });
                    next.push(ArrangementCell {
                        signs: s,
                        polytope: cell.polytope,
                        center: cell.center,
                    });
                }
            }
        }
        cells = next;
    }
    Ok(Arrangement {
        hyperplanes: hyperplanes.to_vec(),
        domain: domain.clone(),
        cells,
    })
}

/// Maximal number of cells cut out of `R^d` by `t` hyperplanes:
/// `sum_{k=0}^{d} C(t, k)`.
pub fn cell_count_bound(t: usize, d: usize) -> u128 {
    (0..=d.min(t))
        .map(|k| binomial(t as u64, k as u64))
        .fold(0u128, |a, b| a.saturating_add(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cut_of_interval() {
        let h = Hyperplane::new(vec![1.0f64], -0.5).unwrap();
        let arr = arrangement_cells(&[h], &Polytope::<f64>::unit_cube(1)).unwrap();
        assert_eq!(arr.sign_vectors(), vec![vec![-1], vec![1]]);
    }

    #[test]
    fn no_hyperplanes_single_cell() {
        let arr = arrangement_cells::<f64>(&[], &Polytope::unit_cube(2)).unwrap();
        assert_eq!(arr.cells.len(), 1);
        assert!(arr.cells[0].signs.is_empty());
    }

    #[test]
    fn empty_domain_is_an_error() {
        let dom = Polytope::<f64>::unit_cube(1).with_inequality(Hyperplane {
            c: vec![-1.0],
            b: 3.0,
        });
        let h = Hyperplane::new(vec![1.0], 0.0).unwrap();
        assert_eq!(
            arrangement_cells(&[h], &dom),
            Err(GeometryError::DomainEmpty)
        );
    }

    #[test]
    fn hyperplane_missing_the_domain_does_not_split() {
        let h = Hyperplane::new(vec![1.0, 0.0], -5.0).unwrap();
        let arr = arrangement_cells(&[h], &Polytope::<f64>::unit_cube(2)).unwrap();
        assert_eq!(arr.sign_vectors(), vec![vec![-1]]);
    }

    #[test]
    fn buck_counts() {
        assert_eq!(cell_count_bound(2, 2), 4);
        assert_eq!(cell_count_bound(3, 5), 8);
        assert_eq!(cell_count_bound(4, 2), 11);
        assert_eq!(cell_count_bound(0, 3), 1);
    }
}
