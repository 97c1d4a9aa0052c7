//! Dense two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems are converted to `min c'x, Ax = b, x >= 0` internally: bounded
//! variables are shifted, variables with only an upper bound are reflected
//! and free variables are split. Redundant equality rows surviving phase I
//! are dropped before phase II.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub relation: Relation,
    pub rhs: T,
}

/// Variable bounds; `None` means unbounded on that side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarBounds<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub constraints: Vec<Constraint<T>>,
    pub bounds: Vec<VarBounds<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<T> {
    pub value: T,
    pub x: Vec<T>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite data in linear program")]
    NonFinite,
    #[error("simplex iteration limit reached")]
    IterationLimit,
}

const MAX_PIVOTS: usize = 200_000;

impl<T: Real> LinearProgram<T> {
    /// New program over `objective.len()` variables, all with bounds `[0, +inf)`.
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![
                VarBounds {
                    lower: Some(T::zero()),
                    upper: None,
                };
                n
            ],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<T>, relation: Relation, rhs: T) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<T>, upper: Option<T>) -> &mut Self {
        self.bounds[var] = VarBounds { lower, upper };
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.set_bounds(var, None, None)
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(LpError::Dimension(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                n
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(LpError::Dimension(format!(
                    "constraint {k} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(LpError::NonFinite);
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(LpError::NonFinite);
        }
        for b in &self.bounds {
            if b.lower.is_some_and(|v| !v.is_finite()) || b.upper.is_some_and(|v| !v.is_finite()) {
                return Err(LpError::NonFinite);
            }
            if let (Some(l), Some(u)) = (b.lower, b.upper) {
                if l > u + T::feas_tol() {
                    return Err(LpError::Infeasible);
                }
            }
        }
        Ok(())
    }

    /// Largest constraint violation of `x` (bounds included).
    pub fn max_violation(&self, x: &[T]) -> T {
        let mut worst = T::zero();
        for c in &self.constraints {
            let lhs = crate::scalar::dot(&c.coeffs, x);
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (b, &xv) in self.bounds.iter().zip(x) {
            if let Some(l) = b.lower {
                worst = worst.max(l - xv);
            }
            if let Some(u) = b.upper {
                worst = worst.max(xv - u);
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug)]
enum VarMap<T> {
    Shift { col: usize, lower: T },
    Reflect { col: usize, upper: T },
    Split { pos: usize, neg: usize },
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

impl<T: Real> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        let inv = T::one() / p;
        for v in self.rows[r].iter_mut() {
            *v *= inv;
        }
        self.rhs[r] *= inv;
        self.rows[r][c] = T::one();
        let (pivot_row, pivot_rhs) = (self.rows[r].clone(), self.rhs[r]);
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c];
            if f == T::zero() {
                continue;
            }
            for (v, &pr) in self.rows[i].iter_mut().zip(&pivot_row) {
                *v -= f * pr;
            }
            self.rows[i][c] = T::zero();
            self.rhs[i] -= f * pivot_rhs;
            if self.rhs[i] < T::zero() && self.rhs[i] > -T::feas_tol() * T::lit(1e-3) {
                self.rhs[i] = T::zero();
            }
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn reduced_costs(&self, cost: &[T]) -> Vec<T> {
        let mut d = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb == T::zero() {
                continue;
            }
            for (dj, &a) in d.iter_mut().zip(&self.rows[i]) {
                *dj -= cb * a;
            }
        }
        d
    }

    /// Minimizes `cost` over the current basis; `allowed[j]` gates entering columns.
    fn optimize(&mut self, cost: &[T], allowed: &[bool]) -> Result<(), LpError> {
        let opt_tol = T::feas_tol() * T::lit(0.1);
        let ptol = T::pivot_tol();
        loop {
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::IterationLimit);
            }
            let d = self.reduced_costs(cost);
            // Bland: lowest-index improving column.
            let entering = (0..self.ncols).find(|&j| allowed[j] && d[j] < -opt_tol);
            let Some(c) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > ptol {
                    let ratio = self.rhs[i] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let tie = (ratio - br).abs() <= opt_tol * (T::one() + br.abs());
                            if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Err(LpError::Unbounded),
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Solves `lp`, returning an optimal basic solution.
pub fn solve_lp<T: Real>(lp: &LinearProgram<T>) -> Result<LpSolution<T>, LpError> {
    lp.validate()?;
    let n = lp.num_vars();

    // Column layout of the structural part.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<(usize, T)> = Vec::new(); // (col, upper) for x' <= u - l
    for b in &lp.bounds {
        let m = match (b.lower, b.upper) {
            (Some(l), u) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = u {
                    extra_rows.push((col, u - l));
                }
                VarMap::Shift { col, lower: l }
            }
            (None, Some(u)) => {
                let col = ncols;
                ncols += 1;
                VarMap::Reflect { col, upper: u }
            }
            (None, None) => {
                let pos = ncols;
                let neg = ncols + 1;
                ncols += 2;
                VarMap::Split { pos, neg }
            }
        };
        maps.push(m);
    }
    let nstruct = ncols;

    // Rows in structural columns.
    let mut rows: Vec<(Vec<T>, Relation, T)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![T::zero(); nstruct];
        let mut rhs = c.rhs;
        for (v, &a) in c.coeffs.iter().enumerate() {
            match maps[v] {
                VarMap::Shift { col, lower } => {
                    row[col] += a;
                    rhs -= a * lower;
                }
                VarMap::Reflect { col, upper } => {
                    row[col] -= a;
                    rhs -= a * upper;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        rows.push((row, c.relation, rhs));
    }
    for &(col, cap) in &extra_rows {
        let mut row = vec![T::zero(); nstruct];
        row[col] = T::one();
        rows.push((row, Relation::Le, cap));
    }

    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    // Artificials only for rows without a usable +1 slack.
    let mut slack_col = vec![None; m];
    let mut slack_sign = vec![T::zero(); m];
    {
        let mut s = nstruct;
        for (i, r) in rows.iter().enumerate() {
            match r.1 {
                Relation::Le => {
                    slack_col[i] = Some(s);
                    slack_sign[i] = T::one();
                    s += 1;
                }
                Relation::Ge => {
                    slack_col[i] = Some(s);
                    slack_sign[i] = -T::one();
                    s += 1;
                }
                Relation::Eq => {}
            }
        }
    }
    let mut needs_art = vec![false; m];
    for (i, r) in rows.iter_mut().enumerate() {
        if r.2 < T::zero() {
            for v in r.0.iter_mut() {
                *v = -*v;
            }
            r.2 = -r.2;
            slack_sign[i] = -slack_sign[i];
        }
        needs_art[i] = !(slack_col[i].is_some() && slack_sign[i] > T::zero());
    }
    let nart = needs_art.iter().filter(|&&b| b).count();
    let total = nstruct + nslack + nart;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        ncols: total,
        pivots: 0,
    };
    let mut art = nstruct + nslack;
    for (i, (row, _, rhs)) in rows.into_iter().enumerate() {
        let mut full = vec![T::zero(); total];
        full[..nstruct].copy_from_slice(&row);
        if let Some(sc) = slack_col[i] {
            full[sc] = slack_sign[i];
        }
        let b = if needs_art[i] {
            full[art] = T::one();
            art += 1;
            art - 1
        } else {
            slack_col[i].unwrap()
        };
        tab.rows.push(full);
        tab.rhs.push(rhs);
        tab.basis.push(b);
    }

    let is_art = |j: usize| j >= nstruct + nslack;
    let scale = tab.rhs.iter().fold(T::one(), |acc, &v| acc.max(v.abs()));

    if nart > 0 {
        let mut cost1 = vec![T::zero(); total];
        for c in cost1.iter_mut().skip(nstruct + nslack) {
            *c = T::one();
        }
        let allowed = vec![true; total];
        tab.optimize(&cost1, &allowed)?;
        let infeas: T = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(&b, _)| is_art(b))
            .fold(T::zero(), |acc, (_, &v)| acc + v.abs());
        if infeas > T::feas_tol() * scale {
            return Err(LpError::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if is_art(tab.basis[i]) {
                let mut best: Option<(usize, T)> = None;
                for j in 0..nstruct + nslack {
                    let a = tab.rows[i][j].abs();
                    if a > T::pivot_tol() * T::lit(100.0) && best.is_none_or(|(_, ba)| a > ba) {
                        best = Some((j, a));
                    }
                }
                match best {
                    Some((j, _)) => {
                        tab.rhs[i] = T::zero();
                        tab.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.rhs.remove(i);
                        tab.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    // Phase II on the structural objective (always minimize internally).
    let mut cost2 = vec![T::zero(); total];
    for (v, &c) in lp.objective.iter().enumerate() {
        let c = if lp.sense == Sense::Maximize { -c } else { c };
        match maps[v] {
            VarMap::Shift { col, .. } => cost2[col] += c,
            VarMap::Reflect { col, .. } => cost2[col] -= c,
            VarMap::Split { pos, neg } => {
                cost2[pos] += c;
                cost2[neg] -= c;
            }
        }
    }
    let allowed: Vec<bool> = (0..total).map(|j| !is_art(j)).collect();
    tab.optimize(&cost2, &allowed)?;

    let mut xs = vec![T::zero(); total];
    for (i, &b) in tab.basis.iter().enumerate() {
        xs[b] = tab.rhs[i].max(T::zero());
    }
    let x: Vec<T> = maps
        .iter()
        .map(|m| match *m {
            VarMap::Shift { col, lower } => lower + xs[col],
            VarMap::Reflect { col, upper } => upper - xs[col],
            VarMap::Split { pos, neg } => xs[pos] - xs[neg],
        })
        .collect();
    let value = crate::scalar::dot(&lp.objective, &x);
    Ok(LpSolution { value, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximize_single_variable() {
        let mut lp = LinearProgram::<f64>::new(Sense::Maximize, vec![1.0]);
        lp.add_constraint(vec![1.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 1.0).abs() < 1e-12);
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, 1.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 1.0);
        lp.add_constraint(vec![1.0, 1.0], Relation::Ge, 2.0);
        assert_eq!(solve_lp(&lp), Err(LpError::Infeasible));
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::<f64>::new(Sense::Maximize, vec![1.0, 0.0]);
        lp.add_constraint(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&lp), Err(LpError::Unbounded));
    }

    #[test]
    fn linear_form_on_simplex_attains_vertex() {
        let c = vec![0.3, -0.7, 0.1, 0.5];
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, c.clone());
        lp.add_constraint(vec![1.0; 4], Relation::Eq, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value + 0.7).abs() < 1e-12);
        assert!((sol.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn free_and_upper_bounded_variables() {
        // min x - y, x free in [-3, inf) via constraint, y <= 2 (no lower bound), x + y >= -1
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![1.0, -1.0]);
        lp.set_free(0);
        lp.set_bounds(1, None, Some(2.0));
        lp.add_constraint(vec![1.0, 0.0], Relation::Ge, -3.0);
        lp.add_constraint(vec![1.0, 1.0], Relation::Ge, -1.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - (-5.0)).abs() < 1e-12, "{sol:?}");
        assert!(lp.max_violation(&sol.x) < 1e-12);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let mut lp = LinearProgram::<f64>::new(Sense::Maximize, vec![1.0, 2.0, 0.0]);
        lp.add_constraint(vec![1.0, 1.0, 1.0], Relation::Eq, 1.0);
        lp.add_constraint(vec![2.0, 2.0, 2.0], Relation::Eq, 2.0);
        lp.add_constraint(vec![0.0, 1.0, 0.0], Relation::Le, 0.25);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 1.25).abs() < 1e-12, "{sol:?}");
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling example (cycles under Dantzig's rule).
        let mut lp = LinearProgram::<f64>::new(Sense::Minimize, vec![-0.75, 150.0, -0.02, 6.0]);
        lp.add_constraint(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add_constraint(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value + 0.05).abs() < 1e-12, "{sol:?}");
    }

    #[test]
    fn works_in_single_precision() {
        let mut lp = LinearProgram::<f32>::new(Sense::Maximize, vec![3.0, 2.0]);
        lp.add_constraint(vec![1.0, 1.0], Relation::Le, 4.0);
        lp.add_constraint(vec![1.0, 3.0], Relation::Le, 6.0);
        lp.set_bounds(0, Some(0.0), Some(3.0));
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.value - 11.0).abs() < 1e-4);
    }
}
