use super::{FiniteGame, GameError};

pub const BUILTIN_NAMES: [&str; 3] = [
    "matching_pennies",
    "matching_pennies_dark",
    "label_efficient",
];

/// Signal laws of the label-efficient game over two signals.
const LE_A: [f64; 2] = [0.9, 0.1];
const LE_B: [f64; 2] = [0.1, 0.9];
const LE_C: [f64; 2] = [0.5, 0.5];

/// Builtin games by name.
///
/// * `matching_pennies`: actions and outcomes `(H, T)`, payoff 1 on a match
///   and -1 otherwise, the opponent's action is observed.
/// * `matching_pennies_dark`: same payoffs, a single uninformative signal.
/// * `label_efficient`: actions `(o, g, b)`, outcomes `(G, B)`; `o` observes
///   an informative signal and earns nothing, `g`/`b` guess a label blindly.
pub fn builtin(name: &str) -> Result<FiniteGame, GameError> {
    let mp = vec![vec![1.0, -1.0], vec![-1.0, 1.0]];
    match name {
        "matching_pennies" => FiniteGame::full_monitoring(mp),
        "matching_pennies_dark" => FiniteGame::new(mp, vec![vec![vec![1.0]; 2]; 2]),
        "label_efficient" => FiniteGame::new(
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![
                vec![LE_A.to_vec(), LE_B.to_vec()],
                vec![LE_C.to_vec(), LE_C.to_vec()],
                vec![LE_C.to_vec(), LE_C.to_vec()],
            ],
        ),
        other => Err(GameError::UnknownGame(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let mp = builtin("matching_pennies").unwrap();
        assert_eq!(mp.payoff(), &[vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert!(mp.flags_are_injective());
        let dark = builtin("matching_pennies_dark").unwrap();
        assert_eq!(dark.num_signals(), 1);
        assert!(dark.is_outcome_dependent());
        let le = builtin("label_efficient").unwrap();
        assert_eq!(
            (le.num_actions(), le.num_outcomes(), le.num_signals()),
            (3, 2, 2)
        );
        assert!(!le.is_outcome_dependent());
        assert_eq!(le.max_abs_payoff(), 1.0);
        assert!(matches!(builtin("chess"), Err(GameError::UnknownGame(_))));
    }
}
