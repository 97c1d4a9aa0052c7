//! Experiment harness: adversaries, the seeded runner, regret metrics
//! computed from trajectories, rate fitting and bound calculators.

mod adversary;
mod bounds;
mod rates;
mod regret;
mod run;

use rayon::prelude::*;
use thiserror::Error;

use crate::br_complex::ComplexError;
use crate::game_model::{FiniteGame, GameError};
use crate::geometry::GeometryError;
use crate::strategies::{Mode, StrategyError};

pub use adversary::{parse_sequence, Adversary, AdversaryView};
pub use bounds::{theoretical_bounds, theta_branches, BoundInputs, ConcentrationBound};
pub use rates::{rate_fit, RateFit};
pub use regret::{
    checkpoints, external_regret, internal_regret_fm, internal_regret_pm, median_curve,
    regret_report, Curve, RegretCurve,
};
pub use run::{run, run_with, RunConfig, StageRecord, Trajectory};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("csv error: {0}")]
    Csv(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Csv(e.to_string())
    }
}

/// Whether regret of `mode` is measured with flags rather than outcomes.
pub fn is_partial(mode: Mode) -> bool {
    matches!(mode, Mode::PmOutcome | Mode::PmAction)
}

/// Runs `config` once per seed in parallel and returns each run's curves.
pub fn run_replicates(
    game: &FiniteGame,
    config: &RunConfig,
    seeds: &[u64],
) -> Result<Vec<(Trajectory, RegretCurve)>, HarnessError> {
    let partial = is_partial(config.strategy.mode);
    seeds
        .par_iter()
        .map(|&seed| {
            let mut c = config.clone();
            c.seed = seed;
            let t = run(game, &c)?;
            let curve = regret_report(&t, game, partial)?;
            Ok((t, curve))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_model::builtin;
    use crate::strategies::StrategyConfig;

    #[test]
    fn replicates_match_serial_runs() {
        let g = builtin("matching_pennies").unwrap();
        let c = RunConfig {
            strategy: StrategyConfig::new(Mode::Fm, 0),
            adversary: Adversary::Iid(vec![0.5, 0.5]),
            horizon: 200,
            seed: 0,
        };
        let out = run_replicates(&g, &c, &[3, 4]).unwrap();
        let mut c3 = c.clone();
        c3.seed = 3;
        assert_eq!(out[0].0, run(&g, &c3).unwrap());
        assert_eq!(out[0].1.n, checkpoints(200));
    }
}
