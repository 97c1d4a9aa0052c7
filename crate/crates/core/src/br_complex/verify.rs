use rand::Rng;

use super::{flag_value, ComplexError, ComplexSpace, LabeledComplex};
use crate::game_model::FiniteGame;

const TOL: f64 = 1e-9;

/// Result of checking a complex against direct best-response computations.
#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// Number of points checked.
    pub samples: usize,
    /// Largest `max_x' value(x') - value(label)` over checked points and the
    /// cells containing them.
    pub max_gap: f64,
    /// Chart point and cell attaining `max_gap`.
    pub witness: Option<(Vec<f64>, usize)>,
    /// Checked points lying in no cell.
    pub uncovered: usize,
    /// Pairs of cells with overlapping interiors.
    pub overlaps: Vec<(usize, usize)>,
}

impl VerifyReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_gap <= tol && self.uncovered == 0 && self.overlaps.is_empty()
    }
}

/// Checks `complex` at `samples` uniform domain points plus every cell
/// vertex and Chebyshev center.
pub fn verify_complex<R: Rng + ?Sized>(
    complex: &LabeledComplex,
    game: &FiniteGame,
    samples: usize,
    rng: &mut R,
) -> Result<VerifyReport, ComplexError> {
    let cx = &complex.complex;
    let mut points = cx.domain.sample(rng, samples)?;
    for cell in &cx.cells {
        points.extend(cell.compute_vertices());
        points.push(cell.chebyshev()?.center);
    }
    let mut report = VerifyReport {
        samples: points.len(),
        max_gap: f64::NEG_INFINITY,
        witness: None,
        uncovered: 0,
        overlaps: cx.overlaps(),
    };
    for z in points {
        let p = complex.chart.lift(&z);
        let best = match complex.space {
            ComplexSpace::Outcomes => (0..game.num_actions())
                .map(|i| game.expected_payoff(&unit(i, game.num_actions()), &p))
                .fold(f64::NEG_INFINITY, f64::max),
            ComplexSpace::Flags => flag_value(game, &p)?.0,
        };
        let mut covered = false;
        for (k, cell) in cx.cells.iter().enumerate() {
            if !cell.contains(&z, TOL) {
                continue;
            }
            covered = true;
            let x = &cx.labels[k];
            let got = match complex.space {
                ComplexSpace::Outcomes => game.expected_payoff(x, &p),
                ComplexSpace::Flags => game.worst_payoff_in_f(x, &p)?,
            };
            let gap = best - got;
            if gap > report.max_gap {
                report.max_gap = gap;
                report.witness = Some((z.clone(), k));
            }
        }
        if !covered {
            report.uncovered += 1;
        }
    }
    Ok(report)
}

fn unit(i: usize, n: usize) -> Vec<f64> {
    (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect()
}
