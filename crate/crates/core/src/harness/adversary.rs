use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::game_model::{check_distribution, FiniteGame};

/// Opponent strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Adversary {
    /// Independent draws from a fixed mixed action.
    Iid(Vec<f64>),
    /// Fixed sequence of outcomes, repeated cyclically.
    Sequence(Vec<usize>),
    /// Plays the outcome that maximizes the forecaster's internal regret
    /// after the stage, in expectation over its current action law.
    Greedy,
}

/// What the adversary may look at before choosing an outcome.
pub struct AdversaryView<'a> {
    pub stage: u64,
    /// Law of the forecaster's action at this stage.
    pub action_law: &'a [f64],
    /// Cumulative internal regret sums `R[i][k]`.
    pub regret_sums: &'a [Vec<f64>],
}

impl Adversary {
    /// Parses `iid:p` (two outcomes, `p` = probability of outcome 1),
    /// `iid:y0,y1,...`, `seq:j0,j1,...` or `greedy`.
    pub fn parse(s: &str, num_outcomes: usize) -> Result<Self, HarnessError> {
        let bad = |m: &str| HarnessError::Invalid(format!("adversary `{s}`: {m}"));
        if s == "greedy" {
            return Ok(Adversary::Greedy);
        }
        if let Some(rest) = s.strip_prefix("iid:") {
            let vals: Vec<f64> = rest
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(&e.to_string()))?;
            let y = if vals.len() == 1 && num_outcomes == 2 {
                vec![1.0 - vals[0], vals[0]]
            } else {
                vals
            };
            check_distribution(&y, num_outcomes).map_err(|e| bad(&e.to_string()))?;
            return Ok(Adversary::Iid(y));
        }
        if let Some(rest) = s.strip_prefix("seq:") {
            let seq = parse_sequence(rest).map_err(|e| bad(&e))?;
            Self::check_sequence(&seq, num_outcomes)?;
            return Ok(Adversary::Sequence(seq));
        }
        Err(bad("expected iid:..., seq:... or greedy"))
    }

    pub fn check_sequence(seq: &[usize], num_outcomes: usize) -> Result<(), HarnessError> {
        if seq.is_empty() {
            return Err(HarnessError::Invalid("empty outcome sequence".into()));
        }
        if let Some(&j) = seq.iter().find(|&&j| j >= num_outcomes) {
            return Err(HarnessError::Invalid(format!("outcome {j} out of range")));
        }
        Ok(())
    }

    pub fn validate(&self, game: &FiniteGame) -> Result<(), HarnessError> {
        match self {
            Adversary::Iid(y) => check_distribution(y, game.num_outcomes())
                .map_err(|e| HarnessError::Invalid(e.to_string())),
            Adversary::Sequence(seq) => Self::check_sequence(seq, game.num_outcomes()),
            Adversary::Greedy => Ok(()),
        }
    }

    pub fn choose<R: Rng + ?Sized>(
        &self,
        game: &FiniteGame,
        view: &AdversaryView,
        rng: &mut R,
    ) -> usize {
        match self {
            Adversary::Iid(y) => {
                if y.len() == 1 {
                    0
                } else {
                    WeightedIndex::new(y).expect("validated law").sample(rng)
                }
            }
            Adversary::Sequence(seq) => seq[((view.stage - 1) % seq.len() as u64) as usize],
            Adversary::Greedy => greedy(game, view),
        }
    }
}

/// Parses a comma or whitespace separated list of outcome indices.
pub fn parse_sequence(s: &str) -> Result<Vec<usize>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

/// Outcome with the largest one-step increase of some internal regret entry
/// under the current action law; ties go to the larger resulting regret,
/// then to the lowest index. Scoring the resulting level alone stalls once a
/// single entry dominates, since every outcome then scores the same.
fn greedy(game: &FiniteGame, view: &AdversaryView) -> usize {
    let ni = game.num_actions();
    let mut best = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0);
    for j in 0..game.num_outcomes() {
        let (mut inc, mut level) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for i in 0..ni {
            for k in 0..ni {
                let d = view.action_law[i] * (game.rho(k, j) - game.rho(i, j));
                inc = inc.max(d);
                level = level.max(view.regret_sums[i][k] + d);
            }
        }
        if inc > best.0 + 1e-12 || ((inc - best.0).abs() <= 1e-12 && level > best.1) {
            best = (inc, level, j);
        }
    }
    best.2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_model::builtin;
    use rand::SeedableRng;

    #[test]
    fn parse_forms() {
        assert_eq!(
            Adversary::parse("iid:0.25", 2).unwrap(),
            Adversary::Iid(vec![0.75, 0.25])
        );
        assert_eq!(
            Adversary::parse("seq:0,1 1", 2).unwrap(),
            Adversary::Sequence(vec![0, 1, 1])
        );
        assert_eq!(Adversary::parse("greedy", 2).unwrap(), Adversary::Greedy);
        assert!(Adversary::parse("iid:1.5", 2).is_err());
        assert!(Adversary::parse("seq:0,2", 2).is_err());
        assert!(Adversary::parse("bandit", 2).is_err());
    }

    #[test]
    fn greedy_punishes_current_law() {
        let g = builtin("matching_pennies").unwrap();
        let zero = vec![vec![0.0; 2]; 2];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let view = AdversaryView {
            stage: 1,
            action_law: &[0.9, 0.1],
            regret_sums: &zero,
        };
        // Mostly H: the mismatch T hurts most.
        assert_eq!(Adversary::Greedy.choose(&g, &view, &mut rng), 1);
    }

    #[test]
    fn sequence_cycles() {
        let g = builtin("matching_pennies").unwrap();
        let zero = vec![vec![0.0; 2]; 2];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let a = Adversary::Sequence(vec![1, 0]);
        let picks: Vec<usize> = (1..=4)
            .map(|n| {
                let v = AdversaryView {
                    stage: n,
                    action_law: &[0.5, 0.5],
                    regret_sums: &zero,
                };
                a.choose(&g, &v, &mut rng)
            })
            .collect();
        assert_eq!(picks, vec![1, 0, 1, 0]);
    }
}
