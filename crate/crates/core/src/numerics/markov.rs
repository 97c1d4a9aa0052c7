//! Invariant measures of nonnegative matrices.
//!
//! `lambda` is invariant for `U` when for every `l`
//! `sum_k lambda(k) U[k][l] = lambda(l) sum_k U[l][k]`, i.e. it is stationary
//! for the continuous-time chain with rates `U[l][k]`. The diagonal cancels.

use crate::scalar::Real;

/// Deterministic invariant measure of a nonnegative square matrix.
///
/// Each closed communicating class gets its unique stationary law (computed
/// with the GTH elimination, which needs no subtractions); classes are then
/// mixed in proportion to their size. With `U = 0` every state is its own
/// closed class and the result is uniform.
pub fn invariant_measure<T: Real>(u: &[Vec<T>]) -> Vec<T> {
    let n = u.len();
    if n == 0 {
        return Vec::new();
    }
    let edge = |a: usize, b: usize| a != b && u[a][b] > T::zero();

    // reach[a][b]: b reachable from a (reflexive).
    let mut reach = vec![vec![false; n]; n];
    for (a, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![a];
        row[a] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if edge(v, w) && !row[w] {
                    row[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let recurrent: Vec<bool> = (0..n)
        .map(|a| (0..n).all(|b| !reach[a][b] || reach[b][a]))
        .collect();

    let mut lambda = vec![T::zero(); n];
    let mut assigned = vec![false; n];
    let total_rec = recurrent.iter().filter(|&&r| r).count();
    let share_unit = T::one() / T::from_usize(total_rec).unwrap();
    for a in 0..n {
        if !recurrent[a] || assigned[a] {
            continue;
        }
        let class: Vec<usize> = (0..n).filter(|&b| reach[a][b]).collect();
        for &c in &class {
            assigned[c] = true;
        }
        let pi = gth(u, &class);
        let weight = share_unit * T::from_usize(class.len()).unwrap();
        for (&c, &p) in class.iter().zip(&pi) {
            lambda[c] = weight * p;
        }
    }
    let s: T = lambda.iter().copied().sum();
    for v in lambda.iter_mut() {
        *v /= s;
    }
    lambda
}

/// Stationary law of the irreducible chain restricted to `class`.
fn gth<T: Real>(u: &[Vec<T>], class: &[usize]) -> Vec<T> {
    let m = class.len();
    if m == 1 {
        return vec![T::one()];
    }
    let mut p: Vec<Vec<T>> = class
        .iter()
        .map(|&a| {
            class
                .iter()
                .map(|&b| if a == b { T::zero() } else { u[a][b] })
                .collect()
        })
        .collect();
    for k in (1..m).rev() {
        let s: T = p[k][..k].iter().copied().sum();
        for row in p.iter_mut().take(k) {
            row[k] /= s;
        }
        for i in 0..k {
            let pik = p[i][k];
            if pik == T::zero() {
                continue;
            }
            for j in 0..k {
                if i != j {
                    let pkj = p[k][j];
                    p[i][j] += pik * pkj;
                }
            }
        }
    }
    let mut pi = vec![T::zero(); m];
    pi[0] = T::one();
    for j in 1..m {
        let mut acc = T::zero();
        for i in 0..j {
            acc += pi[i] * p[i][j];
        }
        pi[j] = acc;
    }
    let s: T = pi.iter().copied().sum();
    pi.into_iter().map(|v| v / s).collect()
}

/// Largest absolute balance residual of `lambda` for `u`.
pub fn balance_residual<T: Real>(u: &[Vec<T>], lambda: &[T]) -> T {
    let n = u.len();
    let mut worst = T::zero();
    for l in 0..n {
        let inflow: T = (0..n).map(|k| lambda[k] * u[k][l]).sum();
        let outflow: T = lambda[l] * u[l].iter().copied().sum::<T>();
        worst = worst.max((inflow - outflow).abs());
    }
    worst
}
