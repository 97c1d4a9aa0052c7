//! Regret-minimizing players built on calibrated forecasters: full
//! monitoring, partial monitoring with outcome-dependent signals, partial
//! monitoring with action-dependent signals (estimated flags) and the naive
//! grid baseline.

mod estimator;
mod naive;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::br_complex::{
    full_monitoring_complex, partial_monitoring_complex, refine_to_laguerre, Chart, ComplexError,
    RefinedComplex,
};
use crate::calibration::{CalibrationError, CalibrationState};
use crate::game_model::FiniteGame;
use crate::geometry::{GeometryError, LaguerreDiagram};

pub use estimator::{estimator, estimator_bias};
pub use naive::{grid_resolution, grid_size, simplex_grid, MAX_GRID};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StrategyError {
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("grid mesh must be positive and finite, got {0}")]
    InvalidDelta(f64),
    #[error("grid of {0} points exceeds the limit")]
    GridTooLarge(u128),
    #[error("gamma exponent must be finite and negative, got {0}")]
    InvalidGamma(f64),
    #[error("observation does not match the feedback of the strategy")]
    WrongObservation,
    #[error("observation index {0} out of range")]
    ObservationOutOfRange(usize),
    #[error("no decision awaiting feedback")]
    NoPendingDecision,
    #[error("malformed strategy config: {0}")]
    Config(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Fm,
    PmOutcome,
    PmAction,
    Naive,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Fm => "fm",
            Mode::PmOutcome => "pm-outcome",
            Mode::PmAction => "pm-action",
            Mode::Naive => "naive",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mode {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fm" => Ok(Mode::Fm),
            "pm-outcome" => Ok(Mode::PmOutcome),
            "pm-action" => Ok(Mode::PmAction),
            "naive" => Ok(Mode::Naive),
            other => Err(StrategyError::Config(format!("unknown mode `{other}`"))),
        }
    }
}

fn default_gamma_exponent() -> f64 {
    -1.0 / 3.0
}

/// Strategy config block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub mode: Mode,
    #[serde(default = "default_gamma_exponent")]
    pub gamma_exponent: f64,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl StrategyConfig {
    pub fn new(mode: Mode, seed: u64) -> Self {
        Self {
            mode,
            gamma_exponent: default_gamma_exponent(),
            delta: None,
            seed,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, StrategyError> {
        serde_json::from_str(s).map_err(|e| StrategyError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// What the strategy observes after each stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feedback {
    Outcome,
    Signal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observation {
    Outcome(usize),
    Signal(usize),
}

/// Choice made at one stage.
#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    /// Stage number, starting at 1.
    pub stage: u64,
    /// Law of the type.
    pub type_law: Vec<f64>,
    pub type_index: usize,
    /// Law the action was drawn from.
    pub mixed: Vec<f64>,
    pub action: usize,
}

/// Forecaster driven by a calibrated predictor over a labeled diagram.
#[derive(Clone, Debug)]
pub struct Strategy {
    mode: Mode,
    game: FiniteGame,
    chart: Chart,
    labels: Vec<Vec<f64>>,
    actions: Option<Vec<usize>>,
    refined: Option<RefinedComplex>,
    calib: CalibrationState<f64>,
    rng: ChaCha8Rng,
    gamma_exponent: f64,
    pending: Option<Decision>,
}

fn indicator(i: usize, n: usize) -> Vec<f64> {
    (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()
}

impl Strategy {
    fn from_refined(mode: Mode, game: &FiniteGame, refined: RefinedComplex, seed: u64) -> Self {
        Self {
            mode,
            game: game.clone(),
            chart: refined.chart.clone(),
            labels: refined.labels.clone(),
            actions: refined.actions.clone(),
            calib: CalibrationState::new(refined.diagram.clone()),
            refined: Some(refined),
            rng: ChaCha8Rng::seed_from_u64(seed),
            gamma_exponent: default_gamma_exponent(),
            pending: None,
        }
    }

    pub fn from_config(game: &FiniteGame, config: &StrategyConfig) -> Result<Self, StrategyError> {
        match config.mode {
            Mode::Fm => make_fm_strategy(game, config.seed),
            Mode::PmOutcome => make_pm_outcome_strategy(game, config.seed),
            Mode::PmAction => make_pm_action_strategy(game, config.gamma_exponent, config.seed),
            Mode::Naive => {
                let delta = config
                    .delta
                    .ok_or_else(|| StrategyError::Config("naive mode needs `delta`".into()))?;
                make_naive_strategy(game, delta, config.seed)
            }
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn feedback(&self) -> Feedback {
        match self.mode {
            Mode::Fm | Mode::Naive => Feedback::Outcome,
            Mode::PmOutcome | Mode::PmAction => Feedback::Signal,
        }
    }

    /// Mixed action `x(l)` of each type.
    pub fn type_actions(&self) -> &[Vec<f64>] {
        &self.labels
    }

    /// Pure action of each type, when types carry pure actions.
    pub fn pure_actions(&self) -> Option<&[usize]> {
        self.actions.as_deref()
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn calibration(&self) -> &CalibrationState<f64> {
        &self.calib
    }

    /// Laguerre refinement behind the types (absent for the naive grid).
    pub fn refined(&self) -> Option<&RefinedComplex> {
        self.refined.as_ref()
    }

    /// `gamma_hat_n = min(1, I n^a)` for stage `n >= 1`.
    pub fn gamma_hat(&self, stage: u64) -> f64 {
        let ni = self.game.num_actions() as f64;
        (ni * (stage as f64).powf(self.gamma_exponent)).min(1.0)
    }

    /// Law of the action given the type at stage `stage`.
    pub fn action_law(&self, l: usize, stage: u64) -> Vec<f64> {
        let x = &self.labels[l];
        match self.mode {
            Mode::PmAction => {
                let g = self.gamma_hat(stage);
                let u = 1.0 / x.len() as f64;
                x.iter().map(|&p| (1.0 - g) * p + g * u).collect()
            }
            _ => x.clone(),
        }
    }

    /// Observation vectors the next update can receive, in chart
    /// coordinates (pure outcomes, signals or estimator values).
    pub fn candidate_observations(&self) -> Vec<Vec<f64>> {
        let ni = self.game.num_actions();
        let nj = self.game.num_outcomes();
        let ns = self.game.num_signals();
        match self.mode {
            Mode::Fm | Mode::Naive => (0..nj)
                .map(|j| self.chart.to_chart(&indicator(j, nj)))
                .collect(),
            Mode::PmOutcome => (0..ns)
                .map(|s| self.chart.to_chart(&self.game.signal_flag(s).flatten()))
                .collect(),
            Mode::PmAction => {
                let stage = self.calib.stage() + 1;
                let mut out = Vec::new();
                for l in 0..self.labels.len() {
                    let xhat = self.action_law(l, stage);
                    for i in 0..ni {
                        for s in 0..ns {
                            let e: Vec<f64> =
                                estimator(ns, &xhat, i, s).into_iter().flatten().collect();
                            out.push(self.chart.to_chart(&e));
                        }
                    }
                }
                out
            }
        }
    }

    /// Draws the type and the action of the next stage.
    pub fn play(&mut self) -> Decision {
        let stage = self.calib.stage() + 1;
        let type_law = self.calib.calib_step();
        let l = draw(&type_law, &mut self.rng);
        let mixed = self.action_law(l, stage);
        let action = match &self.actions {
            Some(a) if self.mode != Mode::PmAction => a[l],
            _ => draw(&mixed, &mut self.rng),
        };
        let d = Decision {
            stage,
            type_law,
            type_index: l,
            mixed,
            action,
        };
        self.pending = Some(d.clone());
        d
    }

    /// Feeds back the observation of the pending stage.
    pub fn observe(&mut self, obs: Observation) -> Result<(), StrategyError> {
        let d = self
            .pending
            .take()
            .ok_or(StrategyError::NoPendingDecision)?;
        let o = match (self.feedback(), obs) {
            (Feedback::Outcome, Observation::Outcome(j)) => {
                let nj = self.game.num_outcomes();
                if j >= nj {
                    return Err(StrategyError::ObservationOutOfRange(j));
                }
                self.chart.to_chart(&indicator(j, nj))
            }
            (Feedback::Signal, Observation::Signal(s)) => {
                let ns = self.game.num_signals();
                if s >= ns {
                    return Err(StrategyError::ObservationOutOfRange(s));
                }
                if self.mode == Mode::PmAction {
                    let e: Vec<f64> = estimator(ns, &d.mixed, d.action, s)
                        .into_iter()
                        .flatten()
                        .collect();
                    self.chart.to_chart(&e)
                } else {
                    self.chart.to_chart(&self.game.signal_flag(s).flatten())
                }
            }
            _ => {
                self.pending = Some(d);
                return Err(StrategyError::WrongObservation);
            }
        };
        self.calib.calib_update(d.type_index, &o)?;
        Ok(())
    }
}

fn draw(law: &[f64], rng: &mut ChaCha8Rng) -> usize {
    if law.len() == 1 {
        return 0;
    }
    WeightedIndex::new(law)
        .expect("valid probability vector")
        .sample(rng)
}

/// Full monitoring: types are cells of a Laguerre refinement of the
/// best-response complex of `Delta(J)`; type `l` plays its pure action.
pub fn make_fm_strategy(game: &FiniteGame, seed: u64) -> Result<Strategy, StrategyError> {
    let refined = refine_to_laguerre(&full_monitoring_complex(game)?)?;
    Ok(Strategy::from_refined(Mode::Fm, game, refined, seed))
}

/// Partial monitoring with signals independent of the own action: calibrates
/// on the realized signals against the refinement of the flag complex.
pub fn make_pm_outcome_strategy(game: &FiniteGame, seed: u64) -> Result<Strategy, StrategyError> {
    if !game.is_outcome_dependent() {
        return Err(StrategyError::ModeMismatch(
            "signal laws depend on the own action; use pm-action".into(),
        ));
    }
    let refined = refine_to_laguerre(&partial_monitoring_complex(game)?)?;
    Ok(Strategy::from_refined(Mode::PmOutcome, game, refined, seed))
}

/// Partial monitoring with action-dependent signals: plays
/// `(1 - g) x(l) + g u` with `g = min(1, I n^a)` and calibrates on the
/// importance-weighted flag estimate.
pub fn make_pm_action_strategy(
    game: &FiniteGame,
    gamma_exponent: f64,
    seed: u64,
) -> Result<Strategy, StrategyError> {
    if !gamma_exponent.is_finite() || gamma_exponent >= 0.0 {
        return Err(StrategyError::InvalidGamma(gamma_exponent));
    }
    let refined = refine_to_laguerre(&partial_monitoring_complex(game)?)?;
    let mut s = Strategy::from_refined(Mode::PmAction, game, refined, seed);
    s.gamma_exponent = gamma_exponent;
    Ok(s)
}

/// Naive baseline: types are the points of a lattice of mesh `delta` on
/// `Delta(J)`, each playing a best response to its point, calibrated with
/// unweighted (Voronoi) scores.
pub fn make_naive_strategy(
    game: &FiniteGame,
    delta: f64,
    seed: u64,
) -> Result<Strategy, StrategyError> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(StrategyError::InvalidDelta(delta));
    }
    let nj = game.num_outcomes();
    let m = grid_resolution(delta);
    let size = grid_size(nj, m);
    if size > MAX_GRID {
        return Err(StrategyError::GridTooLarge(size));
    }
    let chart = Chart::simplex(nj);
    let grid = simplex_grid(nj, m);
    let ni = game.num_actions();
    let actions: Vec<usize> = grid
        .iter()
        .map(|z| {
            let y = chart.lift(z);
            (0..ni).fold(0, |b, i| {
                if game.expected_payoff(&indicator(i, ni), &y)
                    > game.expected_payoff(&indicator(b, ni), &y)
                {
                    i
                } else {
                    b
                }
            })
        })
        .collect();
    let weights = vec![0.0; grid.len()];
    let diagram = LaguerreDiagram::new(grid, weights)?;
    Ok(Strategy {
        mode: Mode::Naive,
        game: game.clone(),
        chart,
        labels: actions.iter().map(|&i| indicator(i, ni)).collect(),
        actions: Some(actions),
        refined: None,
        calib: CalibrationState::new(diagram),
        rng: ChaCha8Rng::seed_from_u64(seed),
        gamma_exponent: default_gamma_exponent(),
        pending: None,
    })
}
