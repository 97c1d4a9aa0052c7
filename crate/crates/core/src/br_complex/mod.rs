//! Best-response complexes: polytopial covers of the outcome simplex (full
//! monitoring) or of the flag set (partial monitoring) whose cells carry a
//! mixed action that is a best response throughout the cell.

mod chart;
mod full;
mod partial;
mod refine;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game_model::{FiniteGame, Flag, GameError};
use crate::geometry::{GeometryError, PolytopialComplex};
use crate::numerics::LpError;

pub use chart::Chart;
pub use full::full_monitoring_complex;
pub use partial::{partial_monitoring_complex, MaxMinProgram};
pub use refine::{refine_to_laguerre, RefinedComplex};
pub use verify::{verify_complex, VerifyReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("flag set of dimension {0} is not supported (at most 3)")]
    UnsupportedDimension(usize),
    #[error("upper envelope did not converge")]
    NoConvergence,
    #[error("worst payoff is not affine on a chamber")]
    NotAffine,
    #[error("point {0:?} lies in no cell of the complex")]
    Uncovered(Vec<f64>),
}

/// Space a complex lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComplexSpace {
    /// Opponent mixed actions `Delta(J)`.
    Outcomes,
    /// Flag set `F = s(Delta(J))`.
    Flags,
}

/// Complex in chart coordinates with mixed-action labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledComplex {
    pub space: ComplexSpace,
    pub chart: Chart,
    pub complex: PolytopialComplex<f64, Vec<f64>>,
    /// Pure action of each cell, when labels are pure.
    pub actions: Option<Vec<usize>>,
}

impl LabeledComplex {
    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    /// Lowest-index cell containing the ambient point `p`.
    pub fn locate_ambient(&self, p: &[f64], tol: f64) -> Option<usize> {
        self.complex.locate(&self.chart.to_chart(p), tol)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

/// `max_x W(x, f)` for a flattened flag `f` in (or numerically near) `F`.
pub fn flag_value(game: &FiniteGame, f: &[f64]) -> Result<(f64, Vec<f64>), GameError> {
    match game.best_worst_in_f(f) {
        Err(GameError::Lp(LpError::Unbounded | LpError::Infeasible)) => {
            game.best_worst(&Flag::from_flat(f, game.num_actions()))
        }
        r => r,
    }
}

/// Builds the complex matching the monitoring of `game`: outcome space for
/// full monitoring, flag space otherwise.
pub fn best_response_complex(
    game: &FiniteGame,
    full: bool,
) -> Result<LabeledComplex, ComplexError> {
    if full {
        full_monitoring_complex(game)
    } else {
        partial_monitoring_complex(game)
    }
}
