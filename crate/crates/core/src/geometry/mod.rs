//! Hyperplane arrangements, power (Laguerre) diagrams, polytopes, polytopial
//! complexes and projections.
//!
//! Hyperplanes are affine functions `h(Z) = <Z, c> + b`. A cell of an
//! arrangement is identified by the signs of all `h_t` on its interior; a
//! polytope inequality `h` means `h(Z) <= 0`.

mod arrangement;
mod complex;
mod distance;
mod hyperplane;
mod laguerre;
mod polytope;
mod projection;
mod serial;

use thiserror::Error;

use crate::numerics::LpError;

pub use arrangement::{arrangement_cells, cell_count_bound, Arrangement, ArrangementCell};
pub use complex::{ComplexCheck, PolytopialComplex};
pub use distance::{distance_constant, hoffman_constant, neighbors};
pub use hyperplane::{sign_vector, Hyperplane, SignVector};
pub use laguerre::{laguerre_from_signs, LaguerreDiagram};
pub use polytope::{ChebyshevBall, Polytope};
pub use projection::{min_norm_in_hull, project_onto_hull, project_onto_polytope};
pub use serial::DiagramDocument;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("domain polytope is empty or has no interior")]
    DomainEmpty,
    #[error("polytope is infeasible")]
    Infeasible,
    #[error("linear objective is unbounded on the polytope")]
    Unbounded,
    #[error("hyperplane normal is zero")]
    ZeroNormal,
    #[error("non-finite coordinates")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("a diagram needs at least one hyperplane")]
    NoHyperplanes,
    #[error("sign vector {0} repeats an earlier one")]
    DuplicateSigns(usize),
    #[error("sign vector {0} has the wrong length or entries other than +1/-1")]
    InvalidSignVector(usize),
    #[error("projection did not converge")]
    ProjectionFailed,
    #[error("rejection sampling failed (polytope too thin for its bounding box)")]
    SamplingFailed,
    #[error(transparent)]
    Lp(#[from] LpError),
}
