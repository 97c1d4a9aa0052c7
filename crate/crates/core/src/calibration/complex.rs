use serde::{Deserialize, Serialize};

use super::CalibrationError;
use crate::geometry::{Hyperplane, Polytope};
use crate::numerics::{matrix_game, LpError};
use crate::scalar::{uniform, Real};

/// Forecaster calibrated with respect to a polytopial complex, obtained by
/// approaching the negative orthant with vector payoffs
/// `U^{l,t} = 1{l_n = l} h_{t,l}(o_n)` where cell `l` is `{h_{t,l} <= 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexCalibration<T> {
    constraints: Vec<Vec<Hyperplane<T>>>,
    outcomes: Vec<Vec<T>>,
    n: u64,
    counts: Vec<u64>,
    cumulative: Vec<Vec<T>>,
}

impl<T: Real> ComplexCalibration<T> {
    /// `outcomes` are the possible observations (pure outcomes in the
    /// coordinates of the cells).
    pub fn new(cells: &[Polytope<T>], outcomes: Vec<Vec<T>>) -> Self {
        let constraints: Vec<Vec<Hyperplane<T>>> =
            cells.iter().map(|c| c.inequalities.clone()).collect();
        let cumulative = constraints
            .iter()
            .map(|c| vec![T::zero(); c.len()])
            .collect();
        Self {
            counts: vec![0; constraints.len()],
            constraints,
            outcomes,
            n: 0,
            cumulative,
        }
    }

    pub fn num_types(&self) -> usize {
        self.constraints.len()
    }

    pub fn stage(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn positive_average(&self) -> Vec<Vec<T>> {
        let nn = T::from_u64(self.n.max(1)).unwrap();
        self.cumulative
            .iter()
            .map(|r| r.iter().map(|&v| (v / nn).max(T::zero())).collect())
            .collect()
    }

    /// `A[l][j] = sum_t U+_{l,t} h_{t,l}(o_j)`.
    fn direction_matrix(&self) -> Vec<Vec<T>> {
        let up = self.positive_average();
        self.constraints
            .iter()
            .zip(&up)
            .map(|(hs, u)| {
                self.outcomes
                    .iter()
                    .map(|o| {
                        hs.iter()
                            .zip(u)
                            .fold(T::zero(), |acc, (h, &w)| acc + w * h.eval(o))
                    })
                    .collect()
            })
            .collect()
    }

    /// Law of the next type: uniform when the average payoff already lies in
    /// the negative orthant, otherwise an optimal strategy of the matrix game
    /// that minimizes `max_j <U+, E_lambda[U | o_j]>`.
    pub fn complex_calib_step(&self) -> Result<Vec<T>, LpError> {
        let up = self.positive_average();
        if up.iter().flatten().all(|&v| v == T::zero()) {
            return Ok(uniform(self.num_types()));
        }
        let neg: Vec<Vec<T>> = self
            .direction_matrix()
            .into_iter()
            .map(|r| r.into_iter().map(|v| -v).collect())
            .collect();
        Ok(matrix_game(&neg)?.row_strategy)
    }

    /// `max_j <U+, E_lambda[U | o_j] - U->`; nonpositive for a valid step.
    pub fn half_space_value(&self, lambda: &[T]) -> T {
        let a = self.direction_matrix();
        (0..self.outcomes.len())
            .map(|j| {
                a.iter()
                    .zip(lambda)
                    .fold(T::zero(), |acc, (r, &p)| acc + p * r[j])
            })
            .fold(T::neg_infinity(), T::max)
    }

    pub fn complex_calib_update(&mut self, l: usize, o: &[T]) -> Result<(), CalibrationError> {
        if l >= self.num_types() {
            return Err(CalibrationError::TypeOutOfRange(l));
        }
        if o.iter().any(|v| !v.is_finite()) {
            return Err(CalibrationError::NonFinite);
        }
        for (c, h) in self.cumulative[l].iter_mut().zip(&self.constraints[l]) {
            if h.dim() != o.len() {
                return Err(CalibrationError::Dimension {
                    got: o.len(),
                    expected: h.dim(),
                });
            }
            *c += h.eval(o);
        }
        self.counts[l] += 1;
        self.n += 1;
        Ok(())
    }

    /// `max_{l,t} (N(l)/n) h_{t,l}(mean(l))^+`.
    pub fn score(&self) -> T {
        self.positive_average()
            .into_iter()
            .flatten()
            .fold(T::zero(), T::max)
    }
}
