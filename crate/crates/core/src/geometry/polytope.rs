use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Hyperplane};
use crate::numerics::linalg::{solve, subsets};
use crate::numerics::{solve_lp, LinearProgram, LpError, Relation, Sense};
use crate::scalar::{norm, Real};

/// Polyhedron `{Z in R^dim : <Z, c_i> + b_i <= 0 for all i}`.
///
/// Equalities are written as two opposite inequalities. The optional vertex
/// list is a cache filled by [`Polytope::with_vertices`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytope<T> {
    pub dim: usize,
    pub inequalities: Vec<Hyperplane<T>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<T>>>,
}

/// Largest inscribed ball (radius capped at 1 for unbounded sets).
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevBall<T> {
    pub center: Vec<T>,
    pub radius: T,
}

impl<T: Real> Polytope<T> {
    pub fn new(dim: usize, inequalities: Vec<Hyperplane<T>>) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::DimensionMismatch(
                "dimension must be at least 1".into(),
            ));
        }
        for h in &inequalities {
            if h.dim() != dim {
                return Err(GeometryError::DimensionMismatch(format!(
                    "inequality of dimension {} in a polytope of dimension {dim}",
                    h.dim()
                )));
            }
        }
        Ok(Self {
            dim,
            inequalities,
            vertices: None,
        })
    }

    /// The whole space `R^dim`.
    pub fn whole_space(dim: usize) -> Self {
        Self {
            dim,
            inequalities: Vec::new(),
            vertices: None,
        }
    }

    /// Axis-aligned box `[lo_k, hi_k]`.
    pub fn boxed(lo: &[T], hi: &[T]) -> Self {
        let d = lo.len();
        let mut ineq = Vec::with_capacity(2 * d);
        for k in 0..d {
            let mut e = vec![T::zero(); d];
            e[k] = T::one();
            ineq.push(Hyperplane {
                c: e.clone(),
                b: -hi[k],
            });
            e[k] = -T::one();
            ineq.push(Hyperplane { c: e, b: lo[k] });
        }
        Self {
            dim: d,
            inequalities: ineq,
            vertices: None,
        }
    }

    /// Unit cube `[0,1]^d`.
    pub fn unit_cube(d: usize) -> Self {
        Self::boxed(&vec![T::zero(); d], &vec![T::one(); d])
    }

    /// Full-dimensional corner simplex `{z >= 0, sum z <= 1}` in `R^d`.
    pub fn corner_simplex(d: usize) -> Self {
        let mut ineq = Vec::with_capacity(d + 1);
        for k in 0..d {
            let mut e = vec![T::zero(); d];
            e[k] = -T::one();
            ineq.push(Hyperplane { c: e, b: T::zero() });
        }
        ineq.push(Hyperplane {
            c: vec![T::one(); d],
            b: -T::one(),
        });
        Self {
            dim: d,
            inequalities: ineq,
            vertices: None,
        }
    }

    /// Probability simplex `{y >= 0, sum y = 1}` in `R^n` (not full-dimensional).
    pub fn probability_simplex(n: usize) -> Self {
        let mut p = Self::corner_simplex(n);
        p.inequalities.push(Hyperplane {
            c: vec![-T::one(); n],
            b: T::one(),
        });
        p
    }

    pub fn with_inequality(mut self, h: Hyperplane<T>) -> Self {
        self.inequalities.push(h);
        self.vertices = None;
        self
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut ineq = self.inequalities.clone();
        ineq.extend(other.inequalities.iter().cloned());
        Self {
            dim: self.dim,
            inequalities: ineq,
            vertices: None,
        }
    }

    /// Largest violation `max_i h_i(z)` (non-positive inside).
    pub fn max_violation(&self, z: &[T]) -> T {
        self.inequalities
            .iter()
            .map(|h| h.eval(z))
            .fold(T::neg_infinity(), |a, b| a.max(b))
    }

    pub fn contains(&self, z: &[T], tol: T) -> bool {
        self.inequalities.iter().all(|h| h.eval(z) <= tol)
    }

    /// Optimizes `<dir, z>` over the polytope.
    pub fn optimize(&self, dir: &[T], sense: Sense) -> Result<(T, Vec<T>), GeometryError> {
        let mut lp = LinearProgram::new(sense, dir.to_vec());
        for k in 0..self.dim {
            lp.set_free(k);
        }
        for h in &self.inequalities {
            lp.add_constraint(h.c.clone(), Relation::Le, -h.b);
        }
        match solve_lp(&lp) {
            Ok(s) => Ok((s.value, s.x)),
            Err(LpError::Infeasible) => Err(GeometryError::Infeasible),
            Err(LpError::Unbounded) => Err(GeometryError::Unbounded),
            Err(e) => Err(GeometryError::Lp(e)),
        }
    }

    /// Some point of the polytope, or `Infeasible`.
    pub fn feasible_point(&self) -> Result<Vec<T>, GeometryError> {
        self.optimize(&vec![T::zero(); self.dim], Sense::Minimize)
            .map(|(_, x)| x)
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible_point().is_ok()
    }

    /// Chebyshev center; a radius of (numerically) zero means empty interior.
    pub fn chebyshev(&self) -> Result<ChebyshevBall<T>, GeometryError> {
        let d = self.dim;
        let mut obj = vec![T::zero(); d + 1];
        obj[d] = T::one();
        let mut lp = LinearProgram::new(Sense::Maximize, obj);
        for k in 0..d {
            lp.set_free(k);
        }
        lp.set_bounds(d, Some(T::zero()), Some(T::one()));
        for h in &self.inequalities {
            let mut row = h.c.clone();
            row.push(norm(&h.c));
            lp.add_constraint(row, Relation::Le, -h.b);
        }
        match solve_lp(&lp) {
            Ok(s) => Ok(ChebyshevBall {
                center: s.x[..d].to_vec(),
                radius: s.x[d],
            }),
            Err(LpError::Infeasible) => Err(GeometryError::Infeasible),
            Err(e) => Err(GeometryError::Lp(e)),
        }
    }

    /// True when the polytope contains a ball of radius above `tol`.
    pub fn has_interior(&self, tol: T) -> bool {
        self.chebyshev().is_ok_and(|b| b.radius > tol)
    }

    /// Vertices by brute force over `dim`-subsets of inequalities.
    ///
    /// Suitable for the small dimensions used here. Returns an empty list
    /// for polyhedra without vertices.
    pub fn compute_vertices(&self) -> Vec<Vec<T>> {
        let d = self.dim;
        let tol = T::feas_tol();
        let units: Vec<Hyperplane<T>> = self.inequalities.iter().map(|h| h.unit()).collect();
        let mut out: Vec<Vec<T>> = Vec::new();
        for idx in subsets(units.len(), d) {
            let a: Vec<Vec<T>> = idx.iter().map(|&i| units[i].c.clone()).collect();
            let b: Vec<T> = idx.iter().map(|&i| -units[i].b).collect();
            let Some(x) = solve(&a, &b) else { continue };
            if units.iter().all(|h| h.eval(&x) <= tol * T::lit(10.0))
                && !out.iter().any(|v| {
                    v.iter()
                        .zip(&x)
                        .all(|(&p, &q)| (p - q).abs() <= tol * T::lit(10.0))
                })
            {
                out.push(x);
            }
        }
        out
    }

    /// Fills the vertex cache.
    pub fn with_vertices(mut self) -> Self {
        self.vertices = Some(self.compute_vertices());
        self
    }

    /// Vertices from the cache, or computed on the fly.
    pub fn vertex_list(&self) -> Vec<Vec<T>> {
        match &self.vertices {
            Some(v) => v.clone(),
            None => self.compute_vertices(),
        }
    }

    /// Axis-aligned bounding box via `2 dim` linear programs.
    pub fn bounding_box(&self) -> Result<(Vec<T>, Vec<T>), GeometryError> {
        let d = self.dim;
        let mut lo = vec![T::zero(); d];
        let mut hi = vec![T::zero(); d];
        for k in 0..d {
            let mut e = vec![T::zero(); d];
            e[k] = T::one();
            lo[k] = self.optimize(&e, Sense::Minimize)?.0;
            hi[k] = self.optimize(&e, Sense::Maximize)?.0;
        }
        Ok((lo, hi))
    }

    /// Uniform sample by rejection from the bounding box. Only meaningful for
    /// full-dimensional bounded polytopes; gives up after `100 * count` draws.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        count: usize,
    ) -> Result<Vec<Vec<T>>, GeometryError> {
        let (lo, hi) = self.bounding_box()?;
        let mut out = Vec::with_capacity(count);
        let mut tries = 0usize;
        while out.len() < count {
            tries += 1;
            if tries > 100 * count.max(1) + 1000 {
                return Err(GeometryError::SamplingFailed);
            }
            let z: Vec<T> = lo
                .iter()
                .zip(&hi)
                .map(|(&l, &h)| l + (h - l) * T::lit(rng.gen::<f64>()))
                .collect();
            if self.contains(&z, T::zero()) {
                out.push(z);
            }
        }
        Ok(out)
    }
}
