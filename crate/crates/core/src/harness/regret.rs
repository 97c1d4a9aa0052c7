use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{HarnessError, StageRecord, Trajectory};
use crate::br_complex::flag_value;
use crate::game_model::FiniteGame;

/// Powers of two up to `horizon`, followed by `horizon` itself.
pub fn checkpoints(horizon: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 1usize;
    while p <= horizon {
        out.push(p);
        p *= 2;
    }
    if out.last() != Some(&horizon) && horizon > 0 {
        out.push(horizon);
    }
    out
}

/// Regret curve `(n, value)` at checkpoints.
pub type Curve = Vec<(usize, f64)>;

/// `max_{i,k} (1/n) sum_{m <= n, i_m = i} (rho(k, j_m) - rho(i, j_m))`.
pub fn internal_regret_fm(records: &[StageRecord], game: &FiniteGame) -> Curve {
    let ni = game.num_actions();
    let mut sums = vec![vec![0.0; ni]; ni];
    let marks = checkpoints(records.len());
    let mut out = Vec::with_capacity(marks.len());
    let mut next = 0;
    for (m, r) in records.iter().enumerate() {
        for (k, s) in sums[r.action].iter_mut().enumerate() {
            *s += game.rho(k, r.opponent) - game.rho(r.action, r.opponent);
        }
        if marks.get(next) == Some(&(m + 1)) {
            let n = (m + 1) as f64;
            let v = sums
                .iter()
                .flatten()
                .fold(f64::NEG_INFINITY, |a, &b| a.max(b))
                / n;
            out.push((m + 1, v));
            next += 1;
        }
    }
    out
}

fn outcome_mean(counts: &[u64]) -> Vec<f64> {
    let t: u64 = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / t as f64).collect()
}

/// `max_l (N_n(l)/n) (max_x W(x, s(jbar_n(l))) - rhobar_n(l))`, with
/// unplayed types contributing zero.
pub fn internal_regret_pm(
    records: &[StageRecord],
    game: &FiniteGame,
    num_types: usize,
) -> Result<Curve, HarnessError> {
    let nj = game.num_outcomes();
    let mut counts = vec![vec![0u64; nj]; num_types];
    let mut payoffs = vec![0.0; num_types];
    let marks = checkpoints(records.len());
    let mut out = Vec::with_capacity(marks.len());
    let mut next = 0;
    for (m, r) in records.iter().enumerate() {
        counts[r.type_index][r.opponent] += 1;
        payoffs[r.type_index] += r.payoff;
        if marks.get(next) == Some(&(m + 1)) {
            let n = (m + 1) as f64;
            let mut best = f64::NEG_INFINITY;
            for l in 0..num_types {
                let nl: u64 = counts[l].iter().sum();
                if nl == 0 {
                    best = best.max(0.0);
                    continue;
                }
                let f = game.flag_of(&outcome_mean(&counts[l])).flatten();
                let (w, _) = flag_value(game, &f)?;
                let v = nl as f64 / n * (w - payoffs[l] / nl as f64);
                best = best.max(v);
            }
            out.push((m + 1, best));
            next += 1;
        }
    }
    Ok(out)
}

/// External regret: `max_i rho(i, jbar_n) - rhobar_n` under full
/// monitoring, `max_x W(x, s(jbar_n)) - rhobar_n` under partial monitoring.
pub fn external_regret(
    records: &[StageRecord],
    game: &FiniteGame,
    partial: bool,
) -> Result<Curve, HarnessError> {
    let nj = game.num_outcomes();
    let ni = game.num_actions();
    let mut counts = vec![0u64; nj];
    let mut payoff = 0.0;
    let marks = checkpoints(records.len());
    let mut out = Vec::with_capacity(marks.len());
    let mut next = 0;
    for (m, r) in records.iter().enumerate() {
        counts[r.opponent] += 1;
        payoff += r.payoff;
        if marks.get(next) == Some(&(m + 1)) {
            let n = (m + 1) as f64;
            let y = outcome_mean(&counts);
            let best = if partial {
                flag_value(game, &game.flag_of(&y).flatten())?.0
            } else {
                (0..ni)
                    .map(|i| (0..nj).map(|j| y[j] * game.rho(i, j)).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            out.push((m + 1, best - payoff / n));
            next += 1;
        }
    }
    Ok(out)
}

/// All regret curves of a run on common checkpoints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegretCurve {
    pub n: Vec<usize>,
    pub internal_fm: Vec<f64>,
    pub internal_pm: Vec<f64>,
    pub external: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct CurveRow {
    n: usize,
    internal_fm: f64,
    internal_pm: f64,
    external: f64,
}

impl RegretCurve {
    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// Value of `series` at the last checkpoint.
    pub fn last(series: &[f64]) -> f64 {
        series.last().copied().unwrap_or(0.0)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), HarnessError> {
        let mut wr = csv::Writer::from_writer(w);
        if self.n.is_empty() {
            wr.write_record(["n", "internal_fm", "internal_pm", "external"])?;
        }
        for k in 0..self.n.len() {
            wr.serialize(CurveRow {
                n: self.n[k],
                internal_fm: self.internal_fm[k],
                internal_pm: self.internal_pm[k],
                external: self.external[k],
            })?;
        }
        wr.flush().map_err(|e| HarnessError::Io(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self, HarnessError> {
        let mut rd = csv::Reader::from_reader(r);
        let mut c = RegretCurve {
            n: Vec::new(),
            internal_fm: Vec::new(),
            internal_pm: Vec::new(),
            external: Vec::new(),
        };
        for row in rd.deserialize::<CurveRow>() {
            let row = row?;
            c.n.push(row.n);
            c.internal_fm.push(row.internal_fm);
            c.internal_pm.push(row.internal_pm);
            c.external.push(row.external);
        }
        Ok(c)
    }
}

/// Regret curves of `trajectory`.
pub fn regret_report(
    trajectory: &Trajectory,
    game: &FiniteGame,
    partial: bool,
) -> Result<RegretCurve, HarnessError> {
    let fm = internal_regret_fm(&trajectory.records, game);
    let pm = internal_regret_pm(&trajectory.records, game, trajectory.type_actions.len())?;
    let ext = external_regret(&trajectory.records, game, partial)?;
    Ok(RegretCurve {
        n: fm.iter().map(|p| p.0).collect(),
        internal_fm: fm.iter().map(|p| p.1).collect(),
        internal_pm: pm.iter().map(|p| p.1).collect(),
        external: ext.iter().map(|p| p.1).collect(),
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Pointwise median of curves sharing checkpoints.
pub fn median_curve(curves: &[RegretCurve]) -> Result<RegretCurve, HarnessError> {
    let first = curves
        .first()
        .ok_or_else(|| HarnessError::Invalid("no curves".into()))?;
    if curves.iter().any(|c| c.n != first.n) {
        return Err(HarnessError::Invalid(
            "curves have different checkpoints".into(),
        ));
    }
    let pick = |f: fn(&RegretCurve) -> &Vec<f64>| -> Vec<f64> {
        (0..first.len())
            .map(|k| median(&mut curves.iter().map(|c| f(c)[k]).collect::<Vec<_>>()))
            .collect()
    };
    Ok(RegretCurve {
        n: first.n.clone(),
        internal_fm: pick(|c| &c.internal_fm),
        internal_pm: pick(|c| &c.internal_pm),
        external: pick(|c| &c.external),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_model::builtin;

    fn rec(n: u64, l: usize, i: usize, j: usize, g: &FiniteGame) -> StageRecord {
        StageRecord {
            n,
            type_index: l,
            action: i,
            opponent: j,
            signal: 0,
            payoff: g.rho(i, j),
        }
    }

    #[test]
    fn checkpoint_grid() {
        assert_eq!(checkpoints(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(checkpoints(8), vec![1, 2, 4, 8]);
        assert!(checkpoints(0).is_empty());
    }

    #[test]
    fn heads_against_tails() {
        let g = builtin("matching_pennies").unwrap();
        let rs = vec![rec(1, 0, 0, 1, &g), rec(2, 0, 0, 1, &g)];
        let c = internal_regret_fm(&rs, &g);
        assert_eq!(c, vec![(1, 2.0), (2, 2.0)]);
    }

    #[test]
    fn constant_game_has_no_regret() {
        let g = FiniteGame::full_monitoring(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let rs: Vec<_> = (1..=5)
            .map(|n| rec(n, 0, (n % 2) as usize, 0, &g))
            .collect();
        assert!(internal_regret_fm(&rs, &g).iter().all(|p| p.1 == 0.0));
    }

    #[test]
    fn single_stage() {
        let g = FiniteGame::full_monitoring(vec![vec![0.0, 3.0], vec![2.0, 1.0]]).unwrap();
        let rs = vec![rec(1, 0, 0, 0, &g)];
        assert_eq!(internal_regret_fm(&rs, &g), vec![(1, 2.0)]);
        let e = external_regret(&rs, &g, false).unwrap();
        assert_eq!(e, vec![(1, 2.0)]);
        let best = vec![rec(1, 0, 1, 0, &g)];
        assert!(external_regret(&best, &g, false).unwrap()[0].1 <= 0.0);
    }

    #[test]
    fn dark_single_type_is_minus_average_payoff() {
        let g = builtin("matching_pennies_dark").unwrap();
        let rs = vec![
            rec(1, 0, 0, 0, &g),
            rec(2, 0, 1, 0, &g),
            rec(3, 0, 0, 0, &g),
        ];
        let c = internal_regret_pm(&rs, &g, 1).unwrap();
        let rho_bar = (1.0 - 1.0 + 1.0) / 3.0;
        assert!((c.last().unwrap().1 + rho_bar).abs() < 1e-12);
        // Type 1 was never played and contributes zero; type 0 is negative.
        assert_eq!(internal_regret_pm(&rs[..1], &g, 2).unwrap()[0].1, 0.0);
    }

    #[test]
    fn revealing_signals_match_fm_per_type() {
        let g = builtin("matching_pennies").unwrap();
        // Types are the actions: pm regret of type i = max_k rho(k, jbar(i)) - rho(i, jbar(i)).
        let rs = vec![
            rec(1, 0, 0, 1, &g),
            rec(2, 1, 1, 1, &g),
            rec(3, 0, 0, 0, &g),
        ];
        let fm = internal_regret_fm(&rs, &g);
        let pm = internal_regret_pm(&rs, &g, 2).unwrap();
        assert!((fm.last().unwrap().1 - pm.last().unwrap().1).abs() < 1e-9);
    }

    #[test]
    fn curve_csv_round_trip_and_median() {
        let a = RegretCurve {
            n: vec![1, 2],
            internal_fm: vec![0.5, 0.25],
            internal_pm: vec![0.0, 0.1],
            external: vec![-0.1, 0.3],
        };
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone())
            .unwrap()
            .starts_with("n,internal_fm,internal_pm,external\n"));
        assert_eq!(RegretCurve::read_csv(&buf[..]).unwrap(), a);
        let mut b = a.clone();
        b.internal_fm = vec![1.5, 0.75];
        let mut c = a.clone();
        c.internal_fm = vec![0.0, 0.0];
        let m = median_curve(&[a.clone(), b, c]).unwrap();
        assert_eq!(m.internal_fm, a.internal_fm);
    }
}
