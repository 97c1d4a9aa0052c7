use serde::Serialize;

use super::HarnessError;

/// Least-squares fit of `log(value) = slope log(n) + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Points used in the fit.
    pub used: usize,
    /// Points in the window dropped because their value was not positive.
    pub filtered: Vec<usize>,
}

/// Fits the log-log slope of `curve` over `from <= n <= to`.
pub fn rate_fit(curve: &[(usize, f64)], from: usize, to: usize) -> Result<RateFit, HarnessError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut filtered = Vec::new();
    for &(n, v) in curve.iter().filter(|(n, _)| (from..=to).contains(n)) {
        if v > 0.0 && v.is_finite() {
            xs.push((n as f64).ln());
            ys.push(v.ln());
        } else {
            filtered.push(n);
        }
    }
    if xs.len() < 2 {
        return Err(HarnessError::Invalid(format!(
            "{} positive points in [{from}, {to}], need 2",
            xs.len()
        )));
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(HarnessError::Invalid("all points share one n".into()));
    }
    let slope = sxy / sxx;
    Ok(RateFit {
        slope,
        intercept: my - slope * mx,
        used: xs.len(),
        filtered,
    })
}
