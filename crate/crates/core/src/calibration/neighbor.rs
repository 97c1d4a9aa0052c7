use serde::{Deserialize, Serialize};

use crate::geometry::{neighbors, LaguerreDiagram, Polytope};
use crate::scalar::Real;

/// Pairs of types whose payoff entries are kept by the neighbor-restricted
/// calibration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborMask {
    /// Symmetric; `allowed[l][k]` iff cells `l` and `k` share a facet.
    pub allowed: Vec<Vec<bool>>,
    /// Largest number of neighbors of a cell.
    pub max_neighbors: usize,
}

/// Neighbor mask of `diagram`, with adjacency taken inside `domain` if given.
pub fn neighbor_restrict<T: Real>(
    diagram: &LaguerreDiagram<T>,
    domain: Option<&Polytope<T>>,
) -> NeighborMask {
    let allowed = neighbors(diagram, domain);
    let max_neighbors = allowed
        .iter()
        .map(|r| r.iter().filter(|&&b| b).count())
        .max()
        .unwrap_or(0);
    NeighborMask {
        allowed,
        max_neighbors,
    }
}
