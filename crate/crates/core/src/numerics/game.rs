//! Zero-sum matrix games through a pair of dual linear programs.

use super::lp::{solve_lp, LinearProgram, LpError, Relation, Sense};
use crate::scalar::Real;

/// Minimax solution of the game where the row player maximizes `x' A y`.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSolution<T> {
    pub value: T,
    pub row_strategy: Vec<T>,
    pub col_strategy: Vec<T>,
    /// Difference between the two LP values; zero up to rounding.
    pub duality_gap: T,
}

fn clean<T: Real>(mut p: Vec<T>) -> Vec<T> {
    for v in p.iter_mut() {
        if *v < T::zero() {
            *v = T::zero();
        }
    }
    let s: T = p.iter().copied().sum();
    p.into_iter().map(|v| v / s).collect()
}

/// Solves the zero-sum game with payoff matrix `a` (rows maximize).
pub fn matrix_game<T: Real>(a: &[Vec<T>]) -> Result<GameSolution<T>, LpError> {
    let m = a.len();
    if m == 0 || a[0].is_empty() || a.iter().any(|r| r.len() != a[0].len()) {
        return Err(LpError::Dimension(
            "matrix game needs a non-empty rectangular matrix".into(),
        ));
    }
    let n = a[0].len();

    // Row player: max v s.t. v - sum_i x_i a_ij <= 0, sum x = 1.
    let mut obj = vec![T::zero(); m + 1];
    obj[m] = T::one();
    let mut lp = LinearProgram::new(Sense::Maximize, obj);
    lp.set_free(m);
    for j in 0..n {
        let mut row: Vec<T> = (0..m).map(|i| -a[i][j]).collect();
        row.push(T::one());
        lp.add_constraint(row, Relation::Le, T::zero());
    }
    let mut simplex_row = vec![T::one(); m];
    simplex_row.push(T::zero());
    lp.add_constraint(simplex_row, Relation::Eq, T::one());
    let rs = solve_lp(&lp)?;

    // Column player: min w s.t. sum_j a_ij y_j - w <= 0, sum y = 1.
    let mut obj = vec![T::zero(); n + 1];
    obj[n] = T::one();
    let mut lp = LinearProgram::new(Sense::Minimize, obj);
    lp.set_free(n);
    for row_a in a {
        let mut row = row_a.clone();
        row.push(-T::one());
        lp.add_constraint(row, Relation::Le, T::zero());
    }
    let mut simplex_row = vec![T::one(); n];
    simplex_row.push(T::zero());
    lp.add_constraint(simplex_row, Relation::Eq, T::one());
    let cs = solve_lp(&lp)?;

    Ok(GameSolution {
        value: rs.value,
        row_strategy: clean(rs.x[..m].to_vec()),
        col_strategy: clean(cs.x[..n].to_vec()),
        duality_gap: (rs.value - cs.value).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_pennies() {
        let g = matrix_game(&[vec![1.0f64, -1.0], vec![-1.0, 1.0]]).unwrap();
        assert!(g.value.abs() < 1e-12);
        assert!((g.row_strategy[0] - 0.5).abs() < 1e-12);
        assert!((g.col_strategy[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let g = matrix_game(&[vec![-2.5]]).unwrap();
        assert_eq!(g.value, -2.5);
        assert_eq!(g.row_strategy, vec![1.0]);
    }

    #[test]
    fn column_two_dominates() {
        let g = matrix_game(&[vec![1.0f64, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(g.value.abs() < 1e-12);
        assert!((g.col_strategy[1] - 1.0).abs() < 1e-12);
        assert!(g.duality_gap < 1e-12);
    }

    #[test]
    fn empty_matrix_rejected() {
        assert!(matrix_game::<f64>(&[]).is_err());
    }
}
