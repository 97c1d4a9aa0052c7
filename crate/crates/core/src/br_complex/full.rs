use super::{Chart, ComplexError, ComplexSpace, LabeledComplex};
use crate::game_model::FiniteGame;
use crate::geometry::{Hyperplane, Polytope, PolytopialComplex};

/// Representatives of identical payoff rows (lowest index kept).
pub(crate) fn distinct_rows(game: &FiniteGame) -> Vec<usize> {
    let rows = game.payoff();
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let dup = keep.iter().any(|&k| {
            rows[k]
                .iter()
                .zip(&rows[i])
                .all(|(a, b)| (a - b).abs() <= 1e-12)
        });
        if !dup {
            keep.push(i);
        }
    }
    keep
}

/// `rho(k, .) - rho(i, .)` as an affine function of the simplex chart.
fn payoff_difference(game: &FiniteGame, k: usize, i: usize) -> (Vec<f64>, f64) {
    let r = game.payoff();
    let nj = game.num_outcomes();
    let c = (1..nj)
        .map(|j| (r[k][j] - r[k][0]) - (r[i][j] - r[i][0]))
        .collect();
    (c, r[k][0] - r[i][0])
}

/// Best-response complex of `Delta(J)`: cell `i` is the set of outcome
/// distributions to which action `i` is a best response.
///
/// Coordinates are those of [`Chart::simplex`] (probability of outcome 0
/// dropped). Cells without interior and duplicate payoff rows are dropped.
pub fn full_monitoring_complex(game: &FiniteGame) -> Result<LabeledComplex, ComplexError> {
    let nj = game.num_outcomes();
    let ni = game.num_actions();
    let chart = Chart::simplex(nj);
    let reps = distinct_rows(game);
    let indicator =
        |i: usize| -> Vec<f64> { (0..ni).map(|k| if k == i { 1.0 } else { 0.0 }).collect() };

    if nj == 1 {
        let best = reps.iter().copied().fold(reps[0], |b, i| {
            if game.rho(i, 0) > game.rho(b, 0) {
                i
            } else {
                b
            }
        });
        let domain = Polytope::boxed(&[-1.0], &[1.0]);
        return Ok(LabeledComplex {
            space: ComplexSpace::Outcomes,
            chart,
            complex: PolytopialComplex::new(domain.clone(), vec![domain], vec![indicator(best)])?,
            actions: Some(vec![best]),
        });
    }

    let domain = Polytope::corner_simplex(nj - 1);
    let tol = 1e-9;
    let mut cells = Vec::new();
    let mut actions = Vec::new();
    'actions: for &i in &reps {
        let mut cell = domain.clone();
        for &k in &reps {
            if k == i {
                continue;
            }
            let (c, b) = payoff_difference(game, k, i);
            if c.iter().all(|v| v.abs() <= 1e-14) {
                if b > 0.0 {
                    continue 'actions;
                }
                continue;
            }
            cell = cell.with_inequality(Hyperplane { c, b });
        }
        if cell.has_interior(tol) {
            cells.push(cell);
            actions.push(i);
        }
    }
    let labels = actions.iter().map(|&i| indicator(i)).collect();
    Ok(LabeledComplex {
        space: ComplexSpace::Outcomes,
        chart,
        complex: PolytopialComplex::new(domain, cells, labels)?,
        actions: Some(actions),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game_model::builtin;

    #[test]
    fn matching_pennies_halves() {
        let cx = full_monitoring_complex(&builtin("matching_pennies").unwrap()).unwrap();
        assert_eq!(cx.actions, Some(vec![0, 1]));
        let v0 = cx.complex.cells[0].compute_vertices();
        let v1 = cx.complex.cells[1].compute_vertices();
        let mut a: Vec<f64> = v0.iter().map(|v| v[0]).collect();
        let mut b: Vec<f64> = v1.iter().map(|v| v[0]).collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, vec![0.0, 0.5]);
        assert_eq!(b, vec![0.5, 1.0]);
    }

    #[test]
    fn dominated_and_duplicate_rows_dropped() {
        let g = FiniteGame::full_monitoring(vec![
            vec![1.0, 0.0],
            vec![-1.0, -1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ])
        .unwrap();
        let cx = full_monitoring_complex(&g).unwrap();
        assert_eq!(cx.actions, Some(vec![0, 2]));
    }

    #[test]
    fn single_outcome() {
        let g = FiniteGame::full_monitoring(vec![vec![0.0], vec![2.0]]).unwrap();
        let cx = full_monitoring_complex(&g).unwrap();
        assert_eq!(cx.actions, Some(vec![1]));
    }
}
