//! Euclidean projections onto polytopes given by inequalities (primal
//! active-set method) and onto convex hulls of finite point sets (Wolfe's
//! minimum-norm-point algorithm).

use super::{GeometryError, Polytope};
use crate::numerics::linalg::{gram, orthonormal_basis, solve};
use crate::scalar::{dot, Real};

const MAX_ITER: usize = 10_000;

/// Nearest point of `p` to `z`.
pub fn project_onto_polytope<T: Real>(z: &[T], p: &Polytope<T>) -> Result<Vec<T>, GeometryError> {
    if z.len() != p.dim {
        return Err(GeometryError::DimensionMismatch(format!(
            "point of dimension {} for polytope of dimension {}",
            z.len(),
            p.dim
        )));
    }
    if p.contains(z, T::zero()) {
        return Ok(z.to_vec());
    }
    let units: Vec<_> = p.inequalities.iter().map(|h| h.unit()).collect();
    let mut x = p.feasible_point()?;
    let tol = T::feas_tol();
    let small = T::epsilon() * T::lit(1e3);
    let mut working: Vec<usize> = Vec::new();

    for _ in 0..MAX_ITER {
        let g: Vec<T> = x.iter().zip(z).map(|(&a, &b)| a - b).collect();
        // Step p = -g - A_W' mu with A_W p = 0.
        let aw: Vec<Vec<T>> = working.iter().map(|&i| units[i].c.clone()).collect();
        let mu = if aw.is_empty() {
            Vec::new()
        } else {
            let rhs: Vec<T> = aw.iter().map(|a| -dot(a, &g)).collect();
            solve(&gram(&aw), &rhs).ok_or(GeometryError::ProjectionFailed)?
        };
        let mut step: Vec<T> = g.iter().map(|&v| -v).collect();
        for (a, &m) in aw.iter().zip(&mu) {
            for (s, &ai) in step.iter_mut().zip(a) {
                *s -= m * ai;
            }
        }
        let step_norm = dot(&step, &step).sqrt();
        if step_norm <= small * (T::one() + dot(&g, &g).sqrt()) {
            // Stationary on the working face; check multiplier signs.
            let (imin, mmin) =
                mu.iter()
                    .enumerate()
                    .fold((usize::MAX, T::zero()), |acc, (i, &m)| {
                        if m < acc.1 {
                            (i, m)
                        } else {
                            acc
                        }
                    });
            if imin == usize::MAX || mmin >= -small {
                return Ok(x);
            }
            working.remove(imin);
            continue;
        }
        // Normals in the span of the working set are constant along the
        // step (bisectors of a power cell are often dependent), so they
        // never block and must not enter the working set.
        let span = orthonormal_basis(&aw);
        let in_span = |c: &[T]| {
            let mut r = c.to_vec();
            for q in &span {
                let t = dot(c, q);
                for (ri, &qi) in r.iter_mut().zip(q) {
                    *ri -= t * qi;
                }
            }
            dot(&r, &r).sqrt() <= tol
        };
        let mut alpha = T::one();
        let mut blocking = None;
        for (i, h) in units.iter().enumerate() {
            if working.contains(&i) {
                continue;
            }
            let ap = dot(&h.c, &step);
            if ap > small * step_norm && !in_span(&h.c) {
                let slack = -(h.eval(&x));
                let a = slack.max(T::zero()) / ap;
                if a < alpha {
                    alpha = a;
                    blocking = Some(i);
                }
            }
        }
        for (xi, &s) in x.iter_mut().zip(&step) {
            *xi += alpha * s;
        }
        if let Some(i) = blocking {
            working.push(i);
        }
    }
    // Iteration cap hit: return the current feasible point only if it is optimal enough.
    if p.contains(&x, tol) {
        Ok(x)
    } else {
        Err(GeometryError::ProjectionFailed)
    }
}

/// Nearest point to `z` of the convex hull of `points`.
pub fn project_onto_hull<T: Real>(z: &[T], points: &[Vec<T>]) -> Result<Vec<T>, GeometryError> {
    let (x, _) = min_norm_in_hull(z, points)?;
    Ok(x)
}

/// Nearest point of the hull together with convex weights over `points`.
pub fn min_norm_in_hull<T: Real>(
    z: &[T],
    points: &[Vec<T>],
) -> Result<(Vec<T>, Vec<T>), GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::Infeasible);
    }
    if points.iter().any(|p| p.len() != z.len()) {
        return Err(GeometryError::DimensionMismatch(
            "hull points differ in dimension".into(),
        ));
    }
    // Deduplicate, remembering the original index.
    let mut uniq: Vec<(usize, Vec<T>)> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if !uniq.iter().any(|(_, q)| q == p) {
            uniq.push((i, p.clone()));
        }
    }
    let shifted: Vec<Vec<T>> = uniq
        .iter()
        .map(|(_, p)| p.iter().zip(z).map(|(&a, &b)| a - b).collect())
        .collect();
    let scale = shifted
        .iter()
        .map(|p| dot(p, p))
        .fold(T::zero(), |a, b| a.max(b))
        .max(T::min_positive_value());
    let eps = T::epsilon() * T::lit(1e3);

    let start = (0..shifted.len())
        .min_by(|&a, &b| {
            dot(&shifted[a], &shifted[a])
                .partial_cmp(&dot(&shifted[b], &shifted[b]))
                .unwrap()
        })
        .unwrap();
    let mut set = vec![start];
    let mut w = vec![T::one()];
    let combine = |set: &[usize], w: &[T]| -> Vec<T> {
        let mut x = vec![T::zero(); z.len()];
        for (&k, &wk) in set.iter().zip(w) {
            for (xi, &pk) in x.iter_mut().zip(&shifted[k]) {
                *xi += wk * pk;
            }
        }
        x
    };
    let mut x = combine(&set, &w);

    for _ in 0..MAX_ITER {
        let xx = dot(&x, &x);
        let (j, xpj) = (0..shifted.len())
            .map(|j| (j, dot(&x, &shifted[j])))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if xpj >= xx - eps * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        w.push(T::zero());
        loop {
            // Affine minimizer over the current set.
            let g = gram(&set.iter().map(|&k| shifted[k].clone()).collect::<Vec<_>>());
            let m = set.len();
            let mut a = vec![vec![T::zero(); m + 1]; m + 1];
            for r in 0..m {
                a[r][..m].copy_from_slice(&g[r]);
                a[r][m] = T::one();
                a[m][r] = T::one();
            }
            let mut rhs = vec![T::zero(); m + 1];
            rhs[m] = T::one();
            let Some(sol) = solve(&a, &rhs) else {
                // Affinely dependent set: drop the newest point.
                set.pop();
                w.pop();
                break;
            };
            let v = &sol[..m];
            if v.iter().all(|&vi| vi > eps) {
                w = v.to_vec();
                break;
            }
            let mut theta = T::one();
            for k in 0..m {
                if v[k] <= eps {
                    let d = w[k] - v[k];
                    if d > T::zero() {
                        theta = theta.min(w[k] / d);
                    }
                }
            }
            for k in 0..m {
                w[k] = w[k] + theta * (v[k] - w[k]);
            }
            let mut k = 0;
            while k < set.len() {
                if w[k] <= eps {
                    set.remove(k);
                    w.remove(k);
                } else {
                    k += 1;
                }
            }
            let s: T = w.iter().copied().sum();
            for wk in w.iter_mut() {
                *wk /= s;
            }
        }
        x = combine(&set, &w);
    }
    let mut weights = vec![T::zero(); points.len()];
    for (&k, &wk) in set.iter().zip(&w) {
        weights[uniq[k].0] = wk;
    }
    let point = x.iter().zip(z).map(|(&a, &b)| a + b).collect();
    Ok((point, weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Hyperplane;
    use rand::{Rng, SeedableRng};

    #[test]
    fn dependent_constraints() {
        // The third constraint is the difference of the first two.
        let h1 = Hyperplane::new(
            vec![
                1.8119368940976104,
                -0.03384562383602052,
                -1.0699760604389947,
            ],
            -0.47563478802869197,
        )
        .unwrap();
        let h2 = Hyperplane::new(
            vec![2.3960339282963092, -0.7141506270473403, -1.656449488389982],
            -0.1974695276194831,
        )
        .unwrap();
        let h3 = Hyperplane::new(
            vec![0.5840970341986989, -0.6803050032113198, -0.5864734279509873],
            0.27816526040920886,
        )
        .unwrap();
        let p = Polytope::new(3, vec![h1, h2, h3]).unwrap();
        let z = [0.1542173257657138, 0.7122251990271324, -0.239975285621717];
        let x = project_onto_polytope(&z, &p).unwrap();
        assert!(p.contains(&x, 1e-9));
        // Optimality: no feasible point found by sampling is closer.
        let d0: f64 = x.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20000 {
            let y: Vec<f64> = x.iter().map(|v| v + rng.gen_range(-0.05..0.05)).collect();
            if p.contains(&y, 0.0) {
                let d: f64 = y.iter().zip(&z).map(|(a, b)| (a - b) * (a - b)).sum();
                assert!(d >= d0 - 1e-12);
            }
        }
    }

    #[test]
    fn clamp_to_interval() {
        let p = Polytope::<f64>::unit_cube(1);
        assert_eq!(project_onto_polytope(&[2.0], &p).unwrap(), vec![1.0]);
        assert_eq!(project_onto_polytope(&[0.3], &p).unwrap(), vec![0.3]);
    }

    #[test]
    fn onto_probability_simplex() {
        let p = Polytope::<f64>::probability_simplex(2);
        let x = project_onto_polytope(&[2.0, 2.0], &p).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
        let x = project_onto_polytope(&[3.0, -1.0], &p).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
    }

    #[test]
    fn hull_projection_matches_polytope_projection() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let poly = Polytope::<f64>::corner_simplex(2);
        for z in [[2.0, 2.0], [-1.0, 0.5], [0.2, 0.2], [0.5, -3.0]] {
            let a = project_onto_hull(&z, &pts).unwrap();
            let b = project_onto_polytope(&z, &poly).unwrap();
            assert!(
                (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12,
                "{z:?}"
            );
        }
    }

    #[test]
    fn hull_of_single_point() {
        let (x, w) = min_norm_in_hull(&[5.0, 5.0], &[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(x, vec![1.0, 2.0]);
        assert_eq!(w, vec![1.0, 0.0]);
    }
}
