use std::io::{Read, Write};

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Adversary, AdversaryView, HarnessError};
use crate::game_model::FiniteGame;
use crate::strategies::{Decision, Feedback, Observation, Strategy, StrategyConfig};

/// One simulated repeated game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub strategy: StrategyConfig,
    pub adversary: Adversary,
    pub horizon: usize,
    /// Seeds both the strategy and the environment (adversary and signals).
    pub seed: u64,
}

/// Per-stage record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub n: u64,
    #[serde(rename = "type")]
    pub type_index: usize,
    pub action: usize,
    pub opponent: usize,
    pub signal: usize,
    pub payoff: f64,
}

/// History of a run with the type map needed to evaluate it.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub records: Vec<StageRecord>,
    pub seed: u64,
    /// Mixed action `x(l)` of each type.
    pub type_actions: Vec<Vec<f64>>,
    /// JSON snapshot of the run config.
    pub config: String,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Writes `n,type,action,opponent,signal,payoff` rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut wr = csv::Writer::from_writer(w);
        if self.records.is_empty() {
            wr.write_record(["n", "type", "action", "opponent", "signal", "payoff"])?;
        }
        for r in &self.records {
            wr.serialize(r)?;
        }
        wr.flush().map_err(|e| HarnessError::Io(e.to_string()))?;
        Ok(())
    }

    /// Reads records written by [`Trajectory::write_csv`].
    pub fn read_records<R: Read>(r: R) -> Result<Vec<StageRecord>, HarnessError> {
        let mut rd = csv::Reader::from_reader(r);
        rd.deserialize()
            .map(|r| r.map_err(HarnessError::from))
            .collect()
    }
}

/// Stream id of the environment RNG (the strategy uses stream 0).
const ENV_STREAM: u64 = 1;

/// Simulates `config` on `game`.
pub fn run(game: &FiniteGame, config: &RunConfig) -> Result<Trajectory, HarnessError> {
    run_with(game, config, |_, _| {})
}

/// Like [`run`], calling `hook` after each decision, before the outcome is
/// revealed to the strategy.
pub fn run_with<F>(
    game: &FiniteGame,
    config: &RunConfig,
    mut hook: F,
) -> Result<Trajectory, HarnessError>
where
    F: FnMut(&Strategy, &Decision),
{
    config.adversary.validate(game)?;
    let mut sc = config.strategy.clone();
    sc.seed = config.seed;
    let mut strategy = Strategy::from_config(game, &sc)?;
    let mut env = ChaCha8Rng::seed_from_u64(config.seed);
    env.set_stream(ENV_STREAM);

    let ni = game.num_actions();
    let types = strategy.type_actions().to_vec();
    let mut regret_sums = vec![vec![0.0; ni]; ni];
    let mut records = Vec::with_capacity(config.horizon);
    for _ in 0..config.horizon {
        let d = strategy.play();
        hook(&strategy, &d);
        let mut law = vec![0.0; ni];
        for (l, &p) in d.type_law.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for (a, b) in law.iter_mut().zip(strategy.action_law(l, d.stage)) {
                *a += p * b;
            }
        }
        let view = AdversaryView {
            stage: d.stage,
            action_law: &law,
            regret_sums: &regret_sums,
        };
        let j = config.adversary.choose(game, &view, &mut env);
        let laws = &game.signal()[d.action][j];
        let s = if laws.len() == 1 {
            0
        } else {
            WeightedIndex::new(laws)
                .expect("valid signal law")
                .sample(&mut env)
        };
        let obs = match strategy.feedback() {
            Feedback::Outcome => Observation::Outcome(j),
            Feedback::Signal => Observation::Signal(s),
        };
        strategy.observe(obs)?;
        let i = d.action;
        for (k, r) in regret_sums[i].iter_mut().enumerate() {
            *r += game.rho(k, j) - game.rho(i, j);
        }
        records.push(StageRecord {
            n: d.stage,
            type_index: d.type_index,
            action: i,
            opponent: j,
            signal: s,
            payoff: game.rho(i, j),
        });
    }
    Ok(Trajectory {
        records,
        seed: config.seed,
        type_actions: types,
        config: serde_json::to_string(config).expect("config serializes"),
    })
}
