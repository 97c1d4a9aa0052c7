//! Error-bound constants relating power slack to Euclidean distance, and the
//! adjacency relation between power cells.

use super::{GeometryError, Hyperplane, LaguerreDiagram, Polytope};
use crate::numerics::linalg::{gram, subsets, symmetric_eigenvalues};
use crate::numerics::{solve_lp, LinearProgram, Relation, Sense};
use crate::scalar::{dot, Real};

/// Is `{x in p : h_j(x) = 0 for j in active}` nonempty?
fn face_nonempty<T: Real>(p: &Polytope<T>, active: &[usize]) -> bool {
    let d = p.dim;
    let mut lp = LinearProgram::new(Sense::Minimize, vec![T::zero(); d]);
    for k in 0..d {
        lp.set_free(k);
    }
    for (i, h) in p.inequalities.iter().enumerate() {
        let rel = if active.contains(&i) {
            Relation::Eq
        } else {
            Relation::Le
        };
        lp.add_constraint(h.c.clone(), rel, -h.b);
    }
    solve_lp(&lp).is_ok()
}

/// Hoffman-type constant of a polyhedron `{h_i <= 0}`: for any `Z` with
/// `h_i(Z) <= eps` for all `i`, `dist(Z, p) <= M * eps`.
///
/// The maximum runs over linearly independent subsets `J` of constraints
/// (at most `dim` of them) that are simultaneously active somewhere on `p`;
/// each contributes `sqrt(dim) / sqrt(lambda_min(Q_J))` with `Q_J` the Gram
/// matrix of the normals. Normals are used unscaled, so the constant is in
/// the units of the `h_i`.
pub fn hoffman_constant<T: Real>(p: &Polytope<T>) -> Result<T, GeometryError> {
    if !p.is_feasible() {
        return Err(GeometryError::Infeasible);
    }
    let d = p.dim;
    let touching: Vec<usize> = (0..p.inequalities.len())
        .filter(|&i| face_nonempty(p, &[i]))
        .collect();
    let sqrt_d = T::from_usize(d).unwrap().sqrt();
    let mut best = T::zero();
    for size in 1..=d.min(touching.len()) {
        for sub in subsets(touching.len(), size) {
            let idx: Vec<usize> = sub.iter().map(|&s| touching[s]).collect();
            let normals: Vec<Vec<T>> = idx.iter().map(|&i| p.inequalities[i].c.clone()).collect();
            let scale = normals
                .iter()
                .map(|n| dot(n, n))
                .fold(T::zero(), |a, b| a.max(b));
            let lmin = symmetric_eigenvalues(&gram(&normals))[0];
            if lmin <= T::feas_tol() * T::lit(1e-3) * scale.max(T::one()) {
                continue;
            }
            if size > 1 && !face_nonempty(p, &idx) {
                continue;
            }
            best = best.max(sqrt_d / lmin.sqrt());
        }
    }
    Ok(best)
}

/// Distance constant of a power diagram: `dist(Z, P(l)) <= M_P * eps`
/// whenever `power_slack(Z, l) <= eps`.
///
/// With a `domain`, the bound concerns `P(l) ∩ domain` for points `Z` in the
/// domain; the domain inequalities are normalized to unit normals. Cells that
/// are empty (within the domain) are skipped.
pub fn distance_constant<T: Real>(
    diagram: &LaguerreDiagram<T>,
    domain: Option<&Polytope<T>>,
) -> Result<T, GeometryError> {
    let mut best = T::zero();
    for l in 0..diagram.len() {
        let mut cell = diagram.cell_polytope(l);
        if let Some(dom) = domain {
            if dom.dim != diagram.dim() {
                return Err(GeometryError::DimensionMismatch(
                    "domain and diagram differ in dimension".into(),
                ));
            }
            cell.inequalities
                .extend(dom.inequalities.iter().map(|h| h.unit()));
        }
        match hoffman_constant(&cell) {
            Ok(m) => best = best.max(m),
            Err(GeometryError::Infeasible) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Radius of the largest `(dim-1)`-ball inside the face `P(l) ∩ P(k)`
/// (restricted to `domain` if given), measured within the bisector.
fn face_radius<T: Real>(
    diagram: &LaguerreDiagram<T>,
    l: usize,
    k: usize,
    domain: Option<&Polytope<T>>,
) -> T {
    let d = diagram.dim();
    let bis = diagram.bisector(l, k);
    let nn = dot(&bis.c, &bis.c);
    if nn == T::zero() {
        return T::zero();
    }
    let mut others: Vec<Hyperplane<T>> = Vec::new();
    for m in 0..diagram.len() {
        if m != l && m != k && diagram.sites[m] != diagram.sites[l] {
            others.push(diagram.bisector(l, m));
        }
    }
    if let Some(dom) = domain {
        others.extend(dom.inequalities.iter().cloned());
    }
    let mut obj = vec![T::zero(); d + 1];
    obj[d] = T::one();
    let mut lp = LinearProgram::new(Sense::Maximize, obj);
    for i in 0..d {
        lp.set_free(i);
    }
    lp.set_bounds(d, Some(T::zero()), Some(T::one()));
    let mut row = bis.c.clone();
    row.push(T::zero());
    lp.add_constraint(row, Relation::Eq, -bis.b);
    for h in &others {
        // Norm of the normal's component along the bisector plane.
        let along = dot(&h.c, &bis.c) / nn;
        let tangential: Vec<T> =
            h.c.iter()
                .zip(&bis.c)
                .map(|(&a, &b)| a - along * b)
                .collect();
        let tn = dot(&tangential, &tangential).sqrt();
        let hn = dot(&h.c, &h.c).sqrt();
        let mut row = h.c.iter().map(|&v| v / hn).collect::<Vec<_>>();
        row.push(tn / hn);
        lp.add_constraint(row, Relation::Le, -h.b / hn);
    }
    match solve_lp(&lp) {
        Ok(s) => s.x[d],
        Err(_) => T::zero(),
    }
}

/// Symmetric adjacency of power cells: `l ~ k` iff `P(l) ∩ P(k)` has affine
/// dimension `dim - 1` (within `domain` when given).
pub fn neighbors<T: Real>(
    diagram: &LaguerreDiagram<T>,
    domain: Option<&Polytope<T>>,
) -> Vec<Vec<bool>> {
    let n = diagram.len();
    let mut adj = vec![vec![false; n]; n];
    for l in 0..n {
        for k in l + 1..n {
            let r = face_radius(diagram, l, k, domain);
            if r > T::feas_tol() {
                adj[l][k] = true;
                adj[k][l] = true;
            }
        }
    }
    adj
}
