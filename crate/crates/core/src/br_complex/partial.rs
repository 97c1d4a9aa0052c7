//! Best-response complex under partial monitoring.
//!
//! Work happens in an orthonormal chart of the affine hull of the flag set
//! `F`. Hyperplanes through affinely independent `d`-subsets of the pure
//! flags cut `F` into chambers on which the fiber `{y : s(y) = f}` has a
//! fixed combinatorial type, so every `W(x, .)` is affine on a chamber.
//! Inside a chamber, `g(f) = max_x W(x, f)` is convex; an upper envelope of
//! finitely many `W(x, .)` is grown until it matches `g` at every vertex of
//! every envelope region, which by convexity makes it exact.

use super::{Chart, ComplexError, ComplexSpace, LabeledComplex};
use crate::game_model::FiniteGame;
use crate::geometry::{arrangement_cells, Hyperplane, Polytope, PolytopialComplex};
use crate::numerics::linalg::{orthonormal_basis, rank, solve, subsets};
use crate::scalar::dot;

/// A region of a chamber with the mixed action attaining the envelope there.
type Region = (Polytope<f64>, Vec<f64>);

const MAX_DIM: usize = 3;
const MAX_ROUNDS: usize = 200;
const TOL: f64 = 1e-9;

/// Affine function `<a, z> + b` on the chart.
#[derive(Clone, Debug, PartialEq)]
struct Affine {
    a: Vec<f64>,
    b: f64,
}

impl Affine {
    fn eval(&self, z: &[f64]) -> f64 {
        dot(&self.a, z) + self.b
    }
}

/// Parameterized max-min program `max_x min_{y : s(y) = f} rho(x, y)` over
/// the flag set, expressed in chart coordinates.
#[derive(Clone, Debug)]
pub struct MaxMinProgram<'a> {
    game: &'a FiniteGame,
    chart: Chart,
    /// Pure flags in chart coordinates (deduplicated).
    points: Vec<Vec<f64>>,
    domain: Polytope<f64>,
}

/// Hyperplane through `pts` (affinely independent, `d` of them in `R^d`).
fn hyperplane_through(pts: &[Vec<f64>]) -> Option<Hyperplane<f64>> {
    let d = pts[0].len();
    let diffs: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect())
        .collect();
    let basis = orthonormal_basis(&diffs);
    if basis.len() != pts.len() - 1 {
        return None;
    }
    let mut best: Option<Vec<f64>> = None;
    let mut best_norm = 0.0;
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        for b in &basis {
            let p = dot(&e, b);
            for (ei, &bi) in e.iter_mut().zip(b) {
                *ei -= p * bi;
            }
        }
        let n = dot(&e, &e).sqrt();
        if n > best_norm {
            best_norm = n;
            best = Some(e.into_iter().map(|v| v / n).collect());
        }
    }
    let c = best?;
    let b = -dot(&c, &pts[0]);
    Some(Hyperplane { c, b })
}

fn same_hyperplane(h: &Hyperplane<f64>, g: &Hyperplane<f64>) -> bool {
    let close = |s: f64| {
        h.c.iter().zip(&g.c).all(|(a, b)| (a - s * b).abs() <= 1e-9)
            && (h.b - s * g.b).abs() <= 1e-9
    };
    close(1.0) || close(-1.0)
}

impl<'a> MaxMinProgram<'a> {
    pub fn new(game: &'a FiniteGame) -> Result<Self, ComplexError> {
        let flags: Vec<Vec<f64>> = game.pure_flags().iter().map(|f| f.flatten()).collect();
        let chart = Chart::affine_hull(&flags);
        if chart.intrinsic_dim() > MAX_DIM {
            return Err(ComplexError::UnsupportedDimension(chart.intrinsic_dim()));
        }
        let mut points: Vec<Vec<f64>> = Vec::new();
        for f in &flags {
            let z = chart.to_chart(f);
            if !points
                .iter()
                .any(|p| p.iter().zip(&z).all(|(a, b)| (a - b).abs() <= 1e-12))
            {
                points.push(z);
            }
        }
        let domain = if chart.intrinsic_dim() == 0 {
            Polytope::boxed(&[-1.0], &[1.0])
        } else {
            let (facets, _) = Self::classify(&points);
            Polytope::new(chart.dim(), facets)?
        };
        Ok(Self {
            game,
            chart,
            points,
            domain,
        })
    }

    /// Splits hyperplanes through `d`-subsets of `points` into facets of the
    /// hull (oriented outward) and hyperplanes cutting its interior.
    fn classify(points: &[Vec<f64>]) -> (Vec<Hyperplane<f64>>, Vec<Hyperplane<f64>>) {
        let d = points[0].len();
        let mut facets: Vec<Hyperplane<f64>> = Vec::new();
        let mut cuts: Vec<Hyperplane<f64>> = Vec::new();
        for idx in subsets(points.len(), d) {
            let sel: Vec<Vec<f64>> = idx.iter().map(|&i| points[i].clone()).collect();
            let Some(h) = hyperplane_through(&sel) else {
                continue;
            };
            let vals: Vec<f64> = points.iter().map(|p| h.eval(p)).collect();
            let facet = if vals.iter().all(|&v| v <= TOL) {
                Some(h.clone())
            } else if vals.iter().all(|&v| v >= -TOL) {
                Some(h.flipped())
            } else {
                None
            };
            match facet {
                Some(f) => {
                    if !facets.iter().any(|g| same_hyperplane(g, &f)) {
                        facets.push(f);
                    }
                }
                None => {
                    if !cuts.iter().any(|g| same_hyperplane(g, &h)) {
                        cuts.push(h);
                    }
                }
            }
        }
        (facets, cuts)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    /// `F` in chart coordinates.
    pub fn domain(&self) -> &Polytope<f64> {
        &self.domain
    }

    /// Hyperplanes bounding the chambers of `F`.
    pub fn chamber_hyperplanes(&self) -> Vec<Hyperplane<f64>> {
        if self.chart.intrinsic_dim() == 0 {
            return Vec::new();
        }
        Self::classify(&self.points).1
    }

    /// `max_x W(x, f)` at the flag with chart coordinates `z`.
    pub fn value(&self, z: &[f64]) -> Result<(f64, Vec<f64>), ComplexError> {
        Ok(super::flag_value(self.game, &self.chart.lift(z))?)
    }

    /// `W(x, f)` at the flag with chart coordinates `z`.
    pub fn inner(&self, x: &[f64], z: &[f64]) -> Result<f64, ComplexError> {
        Ok(self.game.worst_payoff_in_f(x, &self.chart.lift(z))?)
    }

    /// Affine expression of `W(x, .)` on a chamber from its vertices.
    fn fit(&self, x: &[f64], vertices: &[Vec<f64>]) -> Result<Affine, ComplexError> {
        let d = self.chart.dim();
        let mut chosen: Vec<&Vec<f64>> = vec![&vertices[0]];
        for v in &vertices[1..] {
            if chosen.len() == d + 1 {
                break;
            }
            let mut diffs: Vec<Vec<f64>> = chosen[1..]
                .iter()
                .map(|p| p.iter().zip(chosen[0]).map(|(a, b)| a - b).collect())
                .collect();
            diffs.push(v.iter().zip(chosen[0]).map(|(a, b)| a - b).collect());
            if rank(&diffs) == diffs.len() {
                chosen.push(v);
            }
        }
        if chosen.len() != d + 1 {
            return Err(ComplexError::NotAffine);
        }
        let rows: Vec<Vec<f64>> = chosen
            .iter()
            .map(|p| {
                let mut r = (*p).clone();
                r.push(1.0);
                r
            })
            .collect();
        let rhs = chosen
            .iter()
            .map(|p| self.inner(x, p))
            .collect::<Result<Vec<f64>, _>>()?;
        let sol = solve(&rows, &rhs).ok_or(ComplexError::NotAffine)?;
        let aff = Affine {
            a: sol[..d].to_vec(),
            b: sol[d],
        };
        for v in vertices {
            if (aff.eval(v) - self.inner(x, v)?).abs() > 1e-7 {
                return Err(ComplexError::NotAffine);
            }
        }
        Ok(aff)
    }

    /// Region of `chamber` where candidate `k` attains the envelope.
    fn region(chamber: &Polytope<f64>, fits: &[Affine], k: usize) -> Option<Polytope<f64>> {
        let mut reg = chamber.clone();
        for (m, f) in fits.iter().enumerate() {
            if m == k {
                continue;
            }
            let c: Vec<f64> = f.a.iter().zip(&fits[k].a).map(|(a, b)| a - b).collect();
            let b = f.b - fits[k].b;
            if c.iter().all(|v| v.abs() <= 1e-12) {
                if b > 1e-12 {
                    return None;
                }
                continue;
            }
            reg = reg.with_inequality(Hyperplane { c, b });
        }
        reg.has_interior(TOL).then_some(reg)
    }

    /// Envelope regions of one chamber with their mixed actions.
    fn envelope(
        &self,
        chamber: &Polytope<f64>,
        center: &[f64],
    ) -> Result<Vec<Region>, ComplexError> {
        let verts = chamber.compute_vertices();
        let mut xs: Vec<Vec<f64>> = vec![self.value(center)?.1];
        let mut fits: Vec<Affine> = vec![self.fit(&xs[0], &verts)?];
        for _ in 0..MAX_ROUNDS {
            let mut added = false;
            'regions: for k in 0..xs.len() {
                let Some(reg) = Self::region(chamber, &fits, k) else {
                    continue;
                };
                for v in reg.compute_vertices() {
                    let (g, xv) = self.value(&v)?;
                    let env = fits
                        .iter()
                        .map(|f| f.eval(&v))
                        .fold(f64::NEG_INFINITY, f64::max);
                    if g > env + TOL {
                        let fit = self.fit(&xv, &verts)?;
                        if fits.iter().any(|f| {
                            f.a.iter().zip(&fit.a).all(|(a, b)| (a - b).abs() <= 1e-12)
                                && (f.b - fit.b).abs() <= 1e-12
                        }) {
                            return Err(ComplexError::NoConvergence);
                        }
                        xs.push(xv);
                        fits.push(fit);
                        added = true;
                        break 'regions;
                    }
                }
            }
            if !added {
                let mut out = Vec::new();
                for k in 0..xs.len() {
                    if let Some(reg) = Self::region(chamber, &fits, k) {
                        out.push((reg, xs[k].clone()));
                    }
                }
                return Ok(out);
            }
        }
        Err(ComplexError::NoConvergence)
    }

    /// Complex of `F` whose cells carry a mixed action that is a best
    /// response to every flag of the cell.
    pub fn solve(&self) -> Result<LabeledComplex, ComplexError> {
        let mut cells: Vec<Polytope<f64>> = Vec::new();
        let mut labels: Vec<Vec<f64>> = Vec::new();
        if self.chart.intrinsic_dim() == 0 {
            let (_, x) = self.value(&[0.0])?;
            cells.push(self.domain.clone());
            labels.push(x);
        } else {
            let arr = arrangement_cells(&self.chamber_hyperplanes(), &self.domain)?;
            for cell in &arr.cells {
                for (reg, x) in self.envelope(&cell.polytope, &cell.center)? {
                    // Identify actions equal up to 1e-9 in sup norm.
                    let x = labels
                        .iter()
                        .find(|l| l.iter().zip(&x).all(|(a, b)| (a - b).abs() <= 1e-9))
                        .cloned()
                        .unwrap_or(x);
                    cells.push(reg);
                    labels.push(x);
                }
            }
        }
        Ok(LabeledComplex {
            space: ComplexSpace::Flags,
            chart: self.chart.clone(),
            complex: PolytopialComplex::new(self.domain.clone(), cells, labels)?,
            actions: None,
        })
    }
}

/// Best-response complex of the flag set `F`.
pub fn partial_monitoring_complex(game: &FiniteGame) -> Result<LabeledComplex, ComplexError> {
    MaxMinProgram::new(game)?.solve()
}
