use rand::Rng;

use super::{check_distribution, FiniteGame, Flag, GameError};
use crate::numerics::{solve_lp, LinearProgram, LpError, Relation, Sense};

/// Uniformly distributed point of the probability simplex with `n` entries.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

impl FiniteGame {
    /// `min rho(x, y)` over `y in Delta(J)` with `s(y) = target`, where
    /// `target` is assumed to lie in `F`; `slack` relaxes the flag equalities.
    fn fiber_min(&self, x: &[f64], target: &[f64], slack: f64) -> Result<f64, LpError> {
        let nj = self.num_outcomes();
        let ns = self.num_signals();
        let mut lp = LinearProgram::new(Sense::Minimize, self.payoff_against(x));
        lp.add_constraint(vec![1.0; nj], Relation::Eq, 1.0);
        for i in 0..self.num_actions() {
            for s in 0..ns {
                let row: Vec<f64> = (0..nj).map(|j| self.signal[i][j][s]).collect();
                let t = target[i * ns + s];
                if slack == 0.0 {
                    lp.add_constraint(row, Relation::Eq, t);
                } else {
                    lp.add_constraint(row.clone(), Relation::Le, t + slack);
                    lp.add_constraint(row, Relation::Ge, t - slack);
                }
            }
        }
        solve_lp(&lp).map(|s| s.value)
    }

    /// Worst payoff `W(x, f) = min { rho(x, y) : s(y) = Pi_F(f) }`.
    pub fn worst_payoff(&self, x: &[f64], f: &Flag) -> Result<f64, GameError> {
        check_distribution(x, self.num_actions())?;
        let target = self.project_flag(f)?.flatten();
        for slack in [0.0, 1e-9, 1e-7] {
            match self.fiber_min(x, &target, slack) {
                Ok(v) => return Ok(v),
                Err(LpError::Infeasible) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        Err(GameError::EmptyPreimage)
    }

    /// `max_x W(x, f)` and a maximizer, from one LP obtained by dualizing the
    /// inner minimization:
    /// `max mu0 + <f', mu>` s.t. `mu0 + sum_{i,s} s_ij(s) mu_is <= rho(x, j)` for all `j`,
    /// `x in Delta(I)`, `mu` free.
    pub fn best_worst(&self, f: &Flag) -> Result<(f64, Vec<f64>), GameError> {
        let target = self.project_flag(f)?.flatten();
        self.best_worst_in_f(&target)
    }

    /// Same as [`FiniteGame::best_worst`] for a flattened flag already in `F`.
    pub fn best_worst_in_f(&self, target: &[f64]) -> Result<(f64, Vec<f64>), GameError> {
        let ni = self.num_actions();
        let nj = self.num_outcomes();
        let ns = self.num_signals();
        let nmu = ni * ns;
        // Variables: x (ni), mu0, mu (nmu).
        let nv = ni + 1 + nmu;
        let mut obj = vec![0.0; nv];
        obj[ni] = 1.0;
        obj[ni + 1..].copy_from_slice(target);
        let mut lp = LinearProgram::new(Sense::Maximize, obj);
        for v in ni..nv {
            lp.set_free(v);
        }
        for j in 0..nj {
            let mut row = vec![0.0; nv];
            for i in 0..ni {
                row[i] = -self.payoff[i][j];
            }
            row[ni] = 1.0;
            for i in 0..ni {
                for s in 0..ns {
                    row[ni + 1 + i * ns + s] = self.signal[i][j][s];
                }
            }
            lp.add_constraint(row, Relation::Le, 0.0);
        }
        let mut simplex = vec![0.0; nv];
        simplex[..ni].iter_mut().for_each(|v| *v = 1.0);
        lp.add_constraint(simplex, Relation::Eq, 1.0);
        let sol = solve_lp(&lp)?;
        let mut x: Vec<f64> = sol.x[..ni].iter().map(|v| v.max(0.0)).collect();
        let s: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= s);
        Ok((sol.value, x))
    }

    /// `W(x, f)` for a flattened flag already in `F` (no projection).
    pub fn worst_payoff_in_f(&self, x: &[f64], target: &[f64]) -> Result<f64, GameError> {
        for slack in [0.0, 1e-9, 1e-7] {
            match self.fiber_min(x, target, slack) {
                Ok(v) => return Ok(v),
                Err(LpError::Infeasible) => continue,
                Err(e) => return Err(e.into()),
            }
        }
        Err(GameError::EmptyPreimage)
    }
}

/// Empirical Lipschitz constant of `W(x, .)` on `F`: the largest
/// finite-difference slope over `pairs` random flag pairs, with `x` ranging
/// over the pure actions and one random mixed action per pair.
pub fn lipschitz_estimate<R: Rng + ?Sized>(
    game: &FiniteGame,
    pairs: usize,
    rng: &mut R,
) -> Result<f64, GameError> {
    let ni = game.num_actions();
    let nj = game.num_outcomes();
    let mut best = 0.0f64;
    for _ in 0..pairs {
        let f1 = game.flag_of(&random_distribution(rng, nj)).flatten();
        let f2 = game.flag_of(&random_distribution(rng, nj)).flatten();
        let dist = crate::scalar::dist_sq(&f1, &f2).sqrt();
        if dist < 1e-9 {
            continue;
        }
        let mut xs: Vec<Vec<f64>> = (0..ni)
            .map(|i| (0..ni).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
            .collect();
        xs.push(random_distribution(rng, ni));
        for x in &xs {
            let w1 = game.worst_payoff_in_f(x, &f1)?;
            let w2 = game.worst_payoff_in_f(x, &f2)?;
            best = best.max((w1 - w2).abs() / dist);
        }
    }
    Ok(best)
}
