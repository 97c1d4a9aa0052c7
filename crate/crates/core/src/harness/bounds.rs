use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::br_complex::RefinedComplex;
use crate::game_model::FiniteGame;
use crate::geometry::distance_constant;
use crate::strategies::Mode;

/// Constants and deviation terms of the high-probability regret bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationBound {
    pub m_n: f64,
    pub v_n: f64,
    pub k_n: f64,
    /// Freedman (Bernstein-type) branch of the deviation term.
    pub theta_freedman: f64,
    /// Hoeffding-Azuma branch of the deviation term.
    pub theta_hoeffding: f64,
    /// Minimum of the two branches.
    pub theta_n: f64,
    /// Calibration score bound `2 M_n / sqrt(n) + theta_n`.
    pub calibration_bound: f64,
    /// Mode-specific constants, `omega[k]` being the `k`-th one.
    pub omega: Vec<f64>,
    /// Regret bound assembled from `omega`.
    pub regret_bound: f64,
    pub m_rho: f64,
    pub m_w: f64,
    pub m_p: f64,
    pub bc_inf: f64,
    pub num_types: usize,
}

/// `(freedman, hoeffding)` deviation branches for `L` types.
pub fn theta_branches(v_n: f64, k_n: f64, num_types: usize, delta: f64, n: f64) -> (f64, f64) {
    let lg = ((num_types * num_types) as f64 / delta).ln();
    let sq = (2.0 * lg).sqrt();
    let freedman = v_n / n.sqrt() * sq + 2.0 / 3.0 * k_n / n * lg;
    let hoeffding = k_n / n.sqrt() * sq;
    (freedman, hoeffding)
}

/// Inputs of the bound calculator that depend on the diagram.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInputs {
    pub num_types: usize,
    pub m_p: f64,
    pub m_rho: f64,
    pub m_w: f64,
    pub bc_inf: f64,
    pub gamma_exponent: f64,
}

impl BoundInputs {
    /// Reads `L`, `M_P` and `|(b, c)|_inf` off the refinement; `M_rho` is the
    /// largest absolute payoff and `M_W` is supplied by the caller.
    pub fn from_refined(
        game: &FiniteGame,
        refined: &RefinedComplex,
        m_w: f64,
    ) -> Result<Self, HarnessError> {
        let m_p = if refined.len() > 1 {
            distance_constant(&refined.diagram, Some(&refined.domain))?
        } else {
            0.0
        };
        let c = refined
            .hyperplanes
            .iter()
            .map(|h| h.c.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        let b = refined
            .hyperplanes
            .iter()
            .map(|h| h.b.abs())
            .fold(0.0, f64::max);
        Ok(Self {
            num_types: refined.len(),
            m_p,
            m_rho: game.max_abs_payoff(),
            m_w,
            bc_inf: c + b,
            gamma_exponent: -1.0 / 3.0,
        })
    }
}

/// Bound constants for `mode` at horizon `n` and confidence `1 - delta`.
///
/// * naive grid: `M_n = 3 sqrt(L)`, `v_n = K_n = 3`;
/// * fm and pm-outcome: `M_n = 4 sqrt(L) |(b,c)|`, `v_n = 2 |(b,c)|`, `K_n = 4 |(b,c)|`;
/// * pm-action: `K_n = 4 / g`, `v_n = 4 sqrt(I / g)`, `M_n = 4 sqrt(L I / g)`
///   with `g = n^a`.
pub fn theoretical_bounds(
    game: &FiniteGame,
    inputs: &BoundInputs,
    mode: Mode,
    delta: f64,
    n: usize,
) -> Result<ConcentrationBound, HarnessError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(HarnessError::Invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    if n == 0 {
        return Err(HarnessError::Invalid("horizon must be positive".into()));
    }
    let nf = n as f64;
    let l = inputs.num_types as f64;
    let ni = game.num_actions() as f64;
    let ns = game.num_signals() as f64;
    let BoundInputs {
        m_p,
        m_rho,
        m_w,
        bc_inf: bc,
        ..
    } = *inputs;
    let (m_n, v_n, k_n) = match mode {
        Mode::Naive => (3.0 * l.sqrt(), 3.0, 3.0),
        Mode::Fm | Mode::PmOutcome => (4.0 * l.sqrt() * bc, 2.0 * bc, 4.0 * bc),
        Mode::PmAction => {
            let g = nf.powf(inputs.gamma_exponent);
            (4.0 * (l * ni / g).sqrt(), 4.0 * (ni / g).sqrt(), 4.0 / g)
        }
    };
    let (theta_freedman, theta_hoeffding) = theta_branches(v_n, k_n, inputs.num_types, delta, nf);
    let theta_n = theta_freedman.min(theta_hoeffding);
    let (omega, regret_bound) = match mode {
        Mode::Naive => (Vec::new(), f64::NAN),
        Mode::Fm => {
            let o0 = 16.0 * m_rho * m_p * l.powf(1.5) * bc;
            let o1 = 8.0 * m_rho * m_p * l.sqrt() * bc;
            let lg = (l * l / delta).ln();
            (
                vec![o0, o1],
                o0 / nf.sqrt() + o1 / nf.sqrt() * (2.0 * lg).sqrt(),
            )
        }
        Mode::PmOutcome => {
            let o0 = 16.0 * m_p * m_w * l.sqrt();
            let o1 = 2.0 * m_w + 8.0 * m_w * m_p + m_rho;
            let o2 = l * (l + 2.0 * ns + 2.0);
            let lg = (2.0 * o2 / delta).ln();
            (
                vec![o0, o1, o2],
                o0 / nf.sqrt() + o1 / nf.sqrt() * (2.0 * lg).sqrt(),
            )
        }
        Mode::PmAction => {
            let o1 = 16.0 * m_p * m_w * (l * ni).sqrt() + 3.0 * m_w * m_rho * ni;
            let o2 = 2.0 * m_w * ni.sqrt() * (8.0 * m_p + ns.sqrt());
            let o3 = m_rho;
            let o4 = 2.0 * m_w * (4.0 * m_p + (ni * ns).sqrt());
            let o5 = l * (l + 2.0 + 2.0 * ni * ns);
            let lg = (2.0 * o5 / delta).ln();
            let c3 = nf.powf(1.0 / 3.0);
            let bound = o1 / c3
                + o2 / c3 * (2.0 * lg).sqrt()
                + o3 / nf.sqrt() * (2.0 * lg).sqrt()
                + 2.0 / 3.0 * o4 / (c3 * c3) * lg;
            // Index 0 is unused so that omega[k] matches the k-th constant.
            (vec![0.0, o1, o2, o3, o4, o5], bound)
        }
    };
    Ok(ConcentrationBound {
        m_n,
        v_n,
        k_n,
        theta_freedman,
        theta_hoeffding,
        theta_n,
        calibration_bound: 2.0 * m_n / nf.sqrt() + theta_n,
        omega,
        regret_bound,
        m_rho,
        m_w,
        m_p,
        bc_inf: bc,
        num_types: inputs.num_types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::br_complex::{full_monitoring_complex, refine_to_laguerre};
    use crate::game_model::builtin;

    #[test]
    fn hoeffding_branch_example() {
        let (f, h) = theta_branches(3.0, 3.0, 2, 0.1, 1e4);
        assert!((h.min(f) - 0.0815).abs() < 5e-5, "{h} {f}");
        assert!(h < f);
    }

    #[test]
    fn theta_nonincreasing_in_n() {
        let mut prev = f64::INFINITY;
        for k in 1..30 {
            let (f, h) = theta_branches(1.0, 3.0, 4, 0.05, (1u64 << k) as f64);
            let t = f.min(h);
            assert!(t <= prev && t >= 0.0);
            prev = t;
        }
    }

    #[test]
    fn mode_constants() {
        let g = builtin("matching_pennies").unwrap();
        let r = refine_to_laguerre(&full_monitoring_complex(&g).unwrap()).unwrap();
        let mut inp = BoundInputs::from_refined(&g, &r, 1.0).unwrap();
        assert_eq!(inp.num_types, 2);
        let naive = theoretical_bounds(&g, &inp, Mode::Naive, 0.1, 1000).unwrap();
        assert!(naive.m_n <= 3.0 * 2f64.sqrt() + 1e-12);
        let fm = theoretical_bounds(&g, &inp, Mode::Fm, 0.1, 1000).unwrap();
        assert!(fm.regret_bound > 0.0 && fm.omega.len() == 2);
        inp.gamma_exponent = -1.0 / 3.0;
        let n = 1000usize;
        let pa = theoretical_bounds(&g, &inp, Mode::PmAction, 0.1, n).unwrap();
        let gamma = (n as f64).powf(-1.0 / 3.0);
        assert!(pa.v_n <= 4.0 * (2.0 / gamma).sqrt() + 1e-12);
        assert!(pa.omega.iter().all(|&o| o >= 0.0));
        assert!(theoretical_bounds(&g, &inp, Mode::Fm, 1.5, 10).is_err());
    }
}
