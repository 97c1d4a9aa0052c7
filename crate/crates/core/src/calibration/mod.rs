//! Calibrated forecasters: invariant-measure calibration against a Laguerre
//! diagram (weighted scores), its neighbor-restricted variant, and
//! approachability-based calibration against a polytopial complex.

mod complex;
mod neighbor;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::LaguerreDiagram;
use crate::numerics::{balance_residual, invariant_measure};
use crate::scalar::{uniform, Real};

pub use complex::ComplexCalibration;
pub use neighbor::{neighbor_restrict, NeighborMask};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("type {0} out of range")]
    TypeOutOfRange(usize),
    #[error("observed vector has dimension {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("observed vector is not finite")]
    NonFinite,
    #[error("mask is {got}x{got}, expected {expected}x{expected}")]
    MaskSize { got: usize, expected: usize },
}

/// Forecaster calibrated with respect to the sites and weights of a
/// Laguerre diagram.
///
/// Type `l` is scored on an observed vector `o` by
/// `P_l(o) = |o - z(l)|^2 - w(l)`; the stage payoff has row `l_n` equal to
/// `P_{l_n}(o) - P_k(o)` and zeros elsewhere. Sums are kept unnormalized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationState<T> {
    diagram: LaguerreDiagram<T>,
    mask: Option<Vec<Vec<bool>>>,
    n: u64,
    counts: Vec<u64>,
    sums: Vec<Vec<T>>,
    cumulative: Vec<Vec<T>>,
}

/// Immutable copy of the counters of a [`CalibrationState`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationSnapshot<T> {
    pub n: u64,
    pub counts: Vec<u64>,
    /// Per-type mean of observed vectors (zero for unplayed types).
    pub means: Vec<Vec<T>>,
    /// Cumulative payoff matrix `n * U_n`.
    pub cumulative: Vec<Vec<T>>,
}

impl<T: Serialize> CalibrationSnapshot<T> {
    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

impl<T: for<'de> Deserialize<'de>> CalibrationSnapshot<T> {
    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

impl<T: Real> CalibrationState<T> {
    pub fn new(diagram: LaguerreDiagram<T>) -> Self {
        let l = diagram.len();
        let d = diagram.dim();
        Self {
            diagram,
            mask: None,
            n: 0,
            counts: vec![0; l],
            sums: vec![vec![T::zero(); d]; l],
            cumulative: vec![vec![T::zero(); l]; l],
        }
    }

    /// Restricts payoff entries to the pairs allowed by `mask`.
    pub fn with_mask(mut self, mask: &NeighborMask) -> Result<Self, CalibrationError> {
        let l = self.num_types();
        if mask.allowed.len() != l {
            return Err(CalibrationError::MaskSize {
                got: mask.allowed.len(),
                expected: l,
            });
        }
        self.mask = Some(mask.allowed.clone());
        Ok(self)
    }

    pub fn num_types(&self) -> usize {
        self.counts.len()
    }

    pub fn dim(&self) -> usize {
        self.diagram.dim()
    }

    pub fn stage(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn diagram(&self) -> &LaguerreDiagram<T> {
        &self.diagram
    }

    /// Score `P_l(o)` of type `l` on `o`.
    pub fn score(&self, o: &[T], l: usize) -> T {
        self.diagram.power(o, l)
    }

    fn allowed(&self, l: usize, k: usize) -> bool {
        self.mask.as_ref().is_none_or(|m| m[l][k])
    }

    /// Row `l` of the stage payoff for observation `o`.
    pub fn payoff_row(&self, l: usize, o: &[T]) -> Vec<T> {
        let pl = self.score(o, l);
        (0..self.num_types())
            .map(|k| {
                if self.allowed(l, k) {
                    pl - self.score(o, k)
                } else {
                    T::zero()
                }
            })
            .collect()
    }

    /// Positive part of the average payoff matrix.
    pub fn positive_average(&self) -> Vec<Vec<T>> {
        if self.n == 0 {
            return self.cumulative.clone();
        }
        let nn = T::from_u64(self.n).unwrap();
        self.cumulative
            .iter()
            .map(|r| r.iter().map(|&v| (v / nn).max(T::zero())).collect())
            .collect()
    }

    /// Law of the next type: an invariant measure of the positive part of
    /// the average payoff matrix (uniform before any observation).
    pub fn calib_step(&self) -> Vec<T> {
        if self.n == 0 {
            return uniform(self.num_types());
        }
        invariant_measure(&self.positive_average())
    }

    /// Records that type `l` was chosen and `o` observed.
    pub fn calib_update(&mut self, l: usize, o: &[T]) -> Result<(), CalibrationError> {
        if l >= self.num_types() {
            return Err(CalibrationError::TypeOutOfRange(l));
        }
        if o.len() != self.dim() {
            return Err(CalibrationError::Dimension {
                got: o.len(),
                expected: self.dim(),
            });
        }
        if o.iter().any(|v| !v.is_finite()) {
            return Err(CalibrationError::NonFinite);
        }
        let row = self.payoff_row(l, o);
        for (c, r) in self.cumulative[l].iter_mut().zip(row) {
            *c += r;
        }
        for (s, &v) in self.sums[l].iter_mut().zip(o) {
            *s += v;
        }
        self.counts[l] += 1;
        self.n += 1;
        Ok(())
    }

    /// `max_o |<U+, E_lambda[U_{n+1} | o]>|` over the candidate observations.
    ///
    /// The inner product expands to `sum_l P_l(o) r_l` where `r` is the
    /// balance residual of `lambda`, so it vanishes for invariant `lambda`.
    pub fn blackwell_residual(&self, lambda: &[T], outcomes: &[Vec<T>]) -> T {
        let up = self.positive_average();
        let l = self.num_types();
        let mut worst = T::zero();
        for o in outcomes {
            let mut acc = T::zero();
            for a in 0..l {
                if lambda[a] == T::zero() {
                    continue;
                }
                let row = self.payoff_row(a, o);
                for k in 0..l {
                    acc += up[a][k] * lambda[a] * row[k];
                }
            }
            worst = worst.max(acc.abs());
        }
        worst
    }

    /// Balance residual of `lambda` for the current positive average.
    pub fn balance_residual(&self, lambda: &[T]) -> T {
        balance_residual(&self.positive_average(), lambda)
    }

    /// Mean observation of type `l`, if it was played.
    pub fn mean(&self, l: usize) -> Option<Vec<T>> {
        let c = self.counts[l];
        (c > 0).then(|| {
            let cc = T::from_u64(c).unwrap();
            self.sums[l].iter().map(|&s| s / cc).collect()
        })
    }

    /// Weighted calibration score
    /// `max_{l,k} (N(l)/n) (P_l(mean(l)) - P_k(mean(l)))`, over allowed pairs.
    pub fn calibration_score(&self) -> T {
        if self.n == 0 {
            return T::zero();
        }
        let nn = T::from_u64(self.n).unwrap();
        let mut best = T::neg_infinity();
        for l in 0..self.num_types() {
            let Some(m) = self.mean(l) else {
                best = best.max(T::zero());
                continue;
            };
            let w = T::from_u64(self.counts[l]).unwrap() / nn;
            for v in self.payoff_row(l, &m) {
                best = best.max(w * v);
            }
        }
        best
    }

    pub fn snapshot(&self) -> CalibrationSnapshot<T> {
        CalibrationSnapshot {
            n: self.n,
            counts: self.counts.clone(),
            means: (0..self.num_types())
                .map(|l| self.mean(l).unwrap_or_else(|| vec![T::zero(); self.dim()]))
                .collect(),
            cumulative: self.cumulative.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> LaguerreDiagram<f64> {
        // Cells x <= 1/2 and x >= 1/2 from the hyperplane x - 1/2 = 0.
        LaguerreDiagram::new(vec![vec![-1.0], vec![1.0]], vec![2.0, 0.0]).unwrap()
    }

    #[test]
    fn first_step_is_uniform() {
        let s = CalibrationState::new(line());
        assert_eq!(s.calib_step(), vec![0.5, 0.5]);
    }

    #[test]
    fn update_increment_matches_power_gap() {
        let mut s = CalibrationState::new(line());
        s.calib_update(0, &[0.6]).unwrap();
        // P_0(0.6) = 2.56 - 2 = 0.56, P_1(0.6) = 0.16.
        assert!((s.cumulative[0][1] - 0.4).abs() < 1e-12);
        assert_eq!(s.cumulative[1], vec![0.0, 0.0]);
        assert_eq!(s.counts(), &[1, 0]);
        assert_eq!(s.mean(0), Some(vec![0.6]));
        assert_eq!(s.mean(1), None);
    }

    #[test]
    fn zero_weights_give_squared_distances() {
        let d = LaguerreDiagram::new(vec![vec![0.0], vec![1.0]], vec![0.0, 0.0]).unwrap();
        let s = CalibrationState::new(d);
        let row = s.payoff_row(0, &[0.3]);
        assert!((row[1] - (0.09f64 - 0.49)).abs() < 1e-15);
    }

    #[test]
    fn invariant_step_has_zero_residual_and_wrong_law_does_not() {
        let mut s = CalibrationState::new(line());
        s.calib_update(0, &[0.9]).unwrap();
        // U+ = [[0, 0.8*...], [0, 0]] up to scale: the invariant law is (0, 1).
        let lam = s.calib_step();
        assert!((lam[1] - 1.0).abs() < 1e-12);
        let outs = vec![vec![0.0], vec![1.0]];
        assert!(s.blackwell_residual(&lam, &outs) <= 1e-12);
        assert!(s.blackwell_residual(&[1.0, 0.0], &outs) > 0.1);
    }

    #[test]
    fn zero_average_has_zero_residual() {
        let s = CalibrationState::new(line());
        assert_eq!(s.blackwell_residual(&[1.0, 0.0], &[vec![0.3]]), 0.0);
    }

    #[test]
    fn rejects_bad_input() {
        let mut s = CalibrationState::new(line());
        assert_eq!(
            s.calib_update(2, &[0.0]),
            Err(CalibrationError::TypeOutOfRange(2))
        );
        assert!(matches!(
            s.calib_update(0, &[0.0, 1.0]),
            Err(CalibrationError::Dimension { .. })
        ));
        assert_eq!(
            s.calib_update(0, &[f64::NAN]),
            Err(CalibrationError::NonFinite)
        );
    }

    #[test]
    fn snapshot_round_trip() {
        let mut s = CalibrationState::new(line());
        s.calib_update(1, &[0.25]).unwrap();
        let snap = s.snapshot();
        let back = CalibrationSnapshot::<f64>::from_json(&snap.to_json().unwrap()).unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.means[0], vec![0.0]);
    }

    #[test]
    fn works_in_f32() {
        let d = LaguerreDiagram::new(vec![vec![-1.0f32], vec![1.0]], vec![2.0, 0.0]).unwrap();
        let mut s = CalibrationState::new(d);
        s.calib_update(0, &[0.6f32]).unwrap();
        let lam = s.calib_step();
        assert!(s.blackwell_residual(&lam, &[vec![0.0], vec![1.0]]) <= 1e-5);
    }
}
