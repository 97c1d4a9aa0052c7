use crate::game_model::FiniteGame;

/// Importance-weighted flag estimate after playing `action` with law `xhat`
/// and observing `signal`: `e[i][s] = 1{i = action, s = signal} / xhat[action]`.
pub fn estimator(num_signals: usize, xhat: &[f64], action: usize, signal: usize) -> Vec<Vec<f64>> {
    let mut e = vec![vec![0.0; num_signals]; xhat.len()];
    e[action][signal] = 1.0 / xhat[action];
    e
}

/// `E[e] - s(j)` computed by enumerating every `(i, s)`; the estimator is
/// unbiased, so every entry is zero up to rounding.
pub fn estimator_bias(game: &FiniteGame, xhat: &[f64], outcome: usize) -> Vec<Vec<f64>> {
    let ns = game.num_signals();
    let mut mean = vec![vec![0.0; ns]; game.num_actions()];
    for (i, &p) in xhat.iter().enumerate() {
        for s in 0..ns {
            let q = p * game.signal()[i][outcome][s];
            if q == 0.0 {
                continue;
            }
            let e = estimator(ns, xhat, i, s);
            for (m, v) in mean.iter_mut().flatten().zip(e.iter().flatten()) {
                *m += q * v;
            }
        }
    }
    let mut y = vec![0.0; game.num_outcomes()];
    y[outcome] = 1.0;
    let flag = game.flag_of(&y);
    for (m, f) in mean.iter_mut().zip(&flag.rows) {
        for (a, b) in m.iter_mut().zip(f) {
            *a -= b;
        }
    }
    mean
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_model::builtin;

    #[test]
    fn single_entry() {
        let e = estimator(2, &[0.5, 0.5], 0, 1);
        assert_eq!(e, vec![vec![0.0, 2.0], vec![0.0, 0.0]]);
    }

    #[test]
    fn unbiased_on_label_efficient() {
        let g = builtin("label_efficient").unwrap();
        let xhat = [0.2, 0.3, 0.5];
        for j in 0..2 {
            let bias = estimator_bias(&g, &xhat, j);
            assert!(bias.iter().flatten().all(|v| v.abs() <= 1e-15), "{bias:?}");
        }
    }
}
