//! Finite games with signals: payoffs, flags, the worst compatible payoff
//! `W(x, f)` and its maximizers.

mod builtin;
mod worst;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{min_norm_in_hull, GeometryError};
use crate::numerics::LpError;

pub use builtin::{builtin, BUILTIN_NAMES};
pub use worst::{lipschitz_estimate, random_distribution};

const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("invalid game: {0}")]
    Invalid(String),
    #[error("unknown builtin game `{0}`")]
    UnknownGame(String),
    #[error("invalid mixed action: {0}")]
    InvalidMixedAction(String),
    #[error("no opponent mixed action generates the flag")]
    EmptyPreimage,
    #[error("malformed game file: {0}")]
    Format(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Vector of signal distributions, one row per own action.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub rows: Vec<Vec<f64>>,
}

impl Flag {
    /// Row-major flattening into `R^{I*S}`.
    pub fn flatten(&self) -> Vec<f64> {
        self.rows.iter().flatten().copied().collect()
    }

    pub fn from_flat(flat: &[f64], num_actions: usize) -> Self {
        let s = flat.len() / num_actions.max(1);
        Self {
            rows: flat.chunks(s.max(1)).map(|c| c.to_vec()).collect(),
        }
    }

    pub fn distance(&self, other: &Flag) -> f64 {
        crate::scalar::dist_sq(&self.flatten(), &other.flatten()).sqrt()
    }
}

/// Payoff `rho: I x J -> R` and signal laws `s: I x J -> Delta(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGame {
    payoff: Vec<Vec<f64>>,
    signal: Vec<Vec<Vec<f64>>>,
    max_abs_payoff: f64,
}

/// On-disk layout of a game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct GameFile {
    #[serde(rename = "I")]
    i: usize,
    #[serde(rename = "J")]
    j: usize,
    #[serde(rename = "S")]
    s: usize,
    payoff: Vec<Vec<f64>>,
    signal: Vec<Vec<Vec<f64>>>,
}

/// Checks that `p` is a probability vector of length `n`.
pub fn check_distribution(p: &[f64], n: usize) -> Result<(), GameError> {
    if p.len() != n {
        return Err(GameError::InvalidMixedAction(format!(
            "length {} instead of {n}",
            p.len()
        )));
    }
    if p.iter().any(|v| !v.is_finite() || *v < -PROB_TOL) {
        return Err(GameError::InvalidMixedAction(
            "negative or non-finite entry".into(),
        ));
    }
    let s: f64 = p.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(GameError::InvalidMixedAction(format!("sums to {s}")));
    }
    Ok(())
}

impl FiniteGame {
    pub fn new(payoff: Vec<Vec<f64>>, signal: Vec<Vec<Vec<f64>>>) -> Result<Self, GameError> {
        let ni = payoff.len();
        if ni == 0 {
            return Err(GameError::Invalid("no actions".into()));
        }
        let nj = payoff[0].len();
        if nj == 0 || payoff.iter().any(|r| r.len() != nj) {
            return Err(GameError::Invalid(
                "payoff matrix is not rectangular".into(),
            ));
        }
        if payoff.iter().flatten().any(|v| !v.is_finite()) {
            return Err(GameError::Invalid("non-finite payoff".into()));
        }
        if signal.len() != ni || signal.iter().any(|r| r.len() != nj) {
            return Err(GameError::Invalid("signal table must be I x J".into()));
        }
        let ns = signal[0][0].len();
        if ns == 0 {
            return Err(GameError::Invalid("no signals".into()));
        }
        for (i, row) in signal.iter().enumerate() {
            for (j, law) in row.iter().enumerate() {
                if law.len() != ns {
                    return Err(GameError::Invalid(format!(
                        "signal law ({i},{j}) has wrong length"
                    )));
                }
                if law.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(GameError::Invalid(format!(
                        "signal law ({i},{j}) has a negative entry"
                    )));
                }
                let s: f64 = law.iter().sum();
                if (s - 1.0).abs() > PROB_TOL {
                    return Err(GameError::Invalid(format!(
                        "signal law ({i},{j}) sums to {s}"
                    )));
                }
            }
        }
        let max_abs_payoff = payoff.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        Ok(Self {
            payoff,
            signal,
            max_abs_payoff,
        })
    }

    /// Game with signals revealing the opponent's action (`s(i,j) = e_j`).
    pub fn full_monitoring(payoff: Vec<Vec<f64>>) -> Result<Self, GameError> {
        let ni = payoff.len();
        let nj = payoff.first().map_or(0, |r| r.len());
        let signal = (0..ni)
            .map(|_| {
                (0..nj)
                    .map(|j| (0..nj).map(|s| if s == j { 1.0 } else { 0.0 }).collect())
                    .collect()
            })
            .collect();
        Self::new(payoff, signal)
    }

    pub fn from_json(s: &str) -> Result<Self, GameError> {
        let f: GameFile = serde_json::from_str(s).map_err(|e| GameError::Format(e.to_string()))?;
        let g = Self::new(f.payoff, f.signal)?;
        if g.num_actions() != f.i || g.num_outcomes() != f.j || g.num_signals() != f.s {
            return Err(GameError::Format(
                "declared I, J, S disagree with the tables".into(),
            ));
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let f = GameFile {
            i: self.num_actions(),
            j: self.num_outcomes(),
            s: self.num_signals(),
            payoff: self.payoff.clone(),
            signal: self.signal.clone(),
        };
        serde_json::to_string_pretty(&f).expect("game serializes")
    }

    /// `I`.
    pub fn num_actions(&self) -> usize {
        self.payoff.len()
    }

    /// `J`.
    pub fn num_outcomes(&self) -> usize {
        self.payoff[0].len()
    }

    /// `S`.
    pub fn num_signals(&self) -> usize {
        self.signal[0][0].len()
    }

    pub fn payoff(&self) -> &[Vec<f64>] {
        &self.payoff
    }

    pub fn signal(&self) -> &[Vec<Vec<f64>>] {
        &self.signal
    }

    /// `M_rho = max |rho(i,j)|`.
    pub fn max_abs_payoff(&self) -> f64 {
        self.max_abs_payoff
    }

    #[inline]
    pub fn rho(&self, i: usize, j: usize) -> f64 {
        self.payoff[i][j]
    }

    /// `rho(x, y)` for mixed actions.
    pub fn expected_payoff(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                acc += xi * yj * self.payoff[i][j];
            }
        }
        acc
    }

    /// Payoff vector `(rho(x, j))_j`.
    pub fn payoff_against(&self, x: &[f64]) -> Vec<f64> {
        (0..self.num_outcomes())
            .map(|j| {
                x.iter()
                    .enumerate()
                    .map(|(i, &xi)| xi * self.payoff[i][j])
                    .sum()
            })
            .collect()
    }

    /// True when signals do not depend on the forecaster's action.
    pub fn is_outcome_dependent(&self) -> bool {
        self.signal.iter().all(|row| row == &self.signal[0])
    }

    /// True when distinct opponent actions yield distinct flags.
    pub fn flags_are_injective(&self) -> bool {
        let flags = self.pure_flags();
        (0..flags.len()).all(|a| (a + 1..flags.len()).all(|b| flags[a].distance(&flags[b]) > 1e-12))
    }

    /// `s(y) = (E_y[s(i, j)])_i`.
    pub fn flag_of(&self, y: &[f64]) -> Flag {
        let ns = self.num_signals();
        let rows = self
            .signal
            .iter()
            .map(|row| {
                let mut acc = vec![0.0; ns];
                for (law, &yj) in row.iter().zip(y) {
                    for (a, &p) in acc.iter_mut().zip(law) {
                        *a += yj * p;
                    }
                }
                acc
            })
            .collect();
        Flag { rows }
    }

    /// Flags of the pure opponent actions (vertices of `F`).
    pub fn pure_flags(&self) -> Vec<Flag> {
        let nj = self.num_outcomes();
        (0..nj)
            .map(|j| {
                let mut y = vec![0.0; nj];
                y[j] = 1.0;
                self.flag_of(&y)
            })
            .collect()
    }

    /// Flag observed when every row is the signal indicator `e_s` (the
    /// outcome-dependent case).
    pub fn signal_flag(&self, s: usize) -> Flag {
        let ns = self.num_signals();
        let mut e = vec![0.0; ns];
        e[s] = 1.0;
        Flag {
            rows: vec![e; self.num_actions()],
        }
    }

    /// Euclidean projection of `f` onto `F`, with the opponent mixed action
    /// realizing it (the hull weights).
    pub fn project_flag_with_preimage(&self, f: &Flag) -> Result<(Flag, Vec<f64>), GameError> {
        let verts: Vec<Vec<f64>> = self.pure_flags().iter().map(Flag::flatten).collect();
        let (p, w) = min_norm_in_hull(&f.flatten(), &verts)?;
        Ok((Flag::from_flat(&p, self.num_actions()), w))
    }

    /// Euclidean projection of `f` onto `F`.
    pub fn project_flag(&self, f: &Flag) -> Result<Flag, GameError> {
        self.project_flag_with_preimage(f).map(|(p, _)| p)
    }
}
