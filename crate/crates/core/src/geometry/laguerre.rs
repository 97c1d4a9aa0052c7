use serde::{Deserialize, Serialize};

use super::{GeometryError, Hyperplane, Polytope, SignVector};
use crate::scalar::{dist_sq, dot, Real};

/// Power diagram: cell `l` is `{Z : |Z - z_l|^2 - w_l <= |Z - z_k|^2 - w_k for all k}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaguerreDiagram<T> {
    pub sites: Vec<Vec<T>>,
    pub weights: Vec<T>,
}

impl<T: Real> LaguerreDiagram<T> {
    pub fn new(sites: Vec<Vec<T>>, weights: Vec<T>) -> Result<Self, GeometryError> {
        if sites.is_empty() || sites.len() != weights.len() {
            return Err(GeometryError::DimensionMismatch(format!(
                "{} sites and {} weights",
                sites.len(),
                weights.len()
            )));
        }
        let d = sites[0].len();
        if sites.iter().any(|s| s.len() != d) {
            return Err(GeometryError::DimensionMismatch(
                "sites differ in dimension".into(),
            ));
        }
        Ok(Self { sites, weights })
    }

    /// Single cell covering everything: site at the origin, zero weight.
    pub fn trivial(dim: usize) -> Self {
        Self {
            sites: vec![vec![T::zero(); dim]],
            weights: vec![T::zero()],
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.sites[0].len()
    }

    /// Power distance `|Z - z_l|^2 - w_l`.
    #[inline]
    pub fn power(&self, z: &[T], l: usize) -> T {
        dist_sq(z, &self.sites[l]) - self.weights[l]
    }

    /// Cell minimizing the power distance; ties go to the lowest index.
    pub fn assign(&self, z: &[T]) -> usize {
        let mut best = 0;
        let mut best_v = self.power(z, 0);
        for l in 1..self.len() {
            let v = self.power(z, l);
            if v < best_v {
                best = l;
                best_v = v;
            }
        }
        best
    }

    /// `max_k power_l(Z) - power_k(Z)`; non-positive iff `Z` lies in cell `l`.
    pub fn power_slack(&self, z: &[T], l: usize) -> T {
        let pl = self.power(z, l);
        (0..self.len())
            .map(|k| pl - self.power(z, k))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// The affine function `power_l - power_k` as a hyperplane (`<= 0` on cell `l`).
    pub fn bisector(&self, l: usize, k: usize) -> Hyperplane<T> {
        let zl = &self.sites[l];
        let zk = &self.sites[k];
        let two = T::lit(2.0);
        Hyperplane {
            c: zk.iter().zip(zl).map(|(&a, &b)| two * (a - b)).collect(),
            b: dot(zl, zl) - dot(zk, zk) - self.weights[l] + self.weights[k],
        }
    }

    /// H-representation of cell `l` with unnormalized bisector inequalities;
    /// sites identical to `z_l` contribute no inequality.
    pub fn cell_polytope(&self, l: usize) -> Polytope<T> {
        let ineq = (0..self.len())
            .filter(|&k| k != l && self.sites[k] != self.sites[l])
            .map(|k| self.bisector(l, k))
            .collect();
        Polytope {
            dim: self.dim(),
            inequalities: ineq,
            vertices: None,
        }
    }

    /// Adds `shift` to every weight (cells are unchanged).
    pub fn shifted_weights(&self, shift: T) -> Self {
        Self {
            sites: self.sites.clone(),
            weights: self.weights.iter().map(|&w| w + shift).collect(),
        }
    }
}

/// Sites and weights realizing the arrangement cells with the given signs:
/// `z(l) = (1/T) sum_t s_t c_t` and `w(l) = |z(l)|^2 + (2/T) sum_t s_t b_t`.
pub fn laguerre_from_signs<T: Real>(
    hyperplanes: &[Hyperplane<T>],
    sign_vectors: &[SignVector],
) -> Result<LaguerreDiagram<T>, GeometryError> {
    let t = hyperplanes.len();
    if t == 0 {
        return Err(GeometryError::NoHyperplanes);
    }
    if sign_vectors.is_empty() {
        return Err(GeometryError::DimensionMismatch("no sign vectors".into()));
    }
    let d = hyperplanes[0].dim();
    if hyperplanes.iter().any(|h| h.dim() != d) {
        return Err(GeometryError::DimensionMismatch(
            "hyperplanes differ in dimension".into(),
        ));
    }
    for (i, s) in sign_vectors.iter().enumerate() {
        if s.len() != t || s.iter().any(|&v| v != 1 && v != -1) {
            return Err(GeometryError::InvalidSignVector(i));
        }
        if sign_vectors[..i].contains(s) {
            return Err(GeometryError::DuplicateSigns(i));
        }
    }
    let tt = T::from_usize(t).unwrap();
    let two = T::lit(2.0);
    let mut sites = Vec::with_capacity(sign_vectors.len());
    let mut weights = Vec::with_capacity(sign_vectors.len());
    for s in sign_vectors {
        let mut z = vec![T::zero(); d];
        let mut sb = T::zero();
        for (h, &sig) in hyperplanes.iter().zip(s) {
            let sig = if sig > 0 { T::one() } else { -T::one() };
            for (zi, &ci) in z.iter_mut().zip(&h.c) {
                *zi += sig * ci;
            }
            sb += sig * h.b;
        }
        for zi in z.iter_mut() {
            *zi /= tt;
        }
        weights.push(dot(&z, &z) + two * sb / tt);
        sites.push(z);
    }
    LaguerreDiagram::new(sites, weights)
}
