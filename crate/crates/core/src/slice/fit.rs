//! Log-log least squares and the scaling verdict rows built on it.

use serde::Serialize;

/// Values at or below this are treated as exact zeros.
pub const ZERO_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 when the values are constant.
    pub r_squared: f64,
    pub points: usize,
}

/// Ordinary least squares of `ln y` on `ln x`. `None` with fewer than two usable points.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Option<LogLogFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > ZERO_FLOOR)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    // Relative to the spread of ln y; a flat series is fitted exactly.
    let r_squared = if syy <= 1e-24 * nf { 1.0 } else { 1.0 - ss_res / syy };
    Some(LogLogFit { slope, intercept, r_squared, points: n })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingKind {
    /// `value <~ delta^target`: slope at least `target - tol`.
    UpperBound,
    /// `value ~ delta^target`: slope within `tol` of `target` and `R^2` above the floor.
    TwoSided,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub label: String,
    pub kind: ScalingKind,
    pub target: f64,
    pub values: Vec<f64>,
    pub fit: Option<LogLogFit>,
    /// `(min, max)` of `value / delta^target` over the sweep.
    pub band: Option<(f64, f64)>,
    /// Every value was zero.
    pub degenerate: bool,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitTolerances {
    pub slope: f64,
    pub r_squared: f64,
    pub min_points: usize,
}

impl Default for FitTolerances {
    fn default() -> Self {
        FitTolerances { slope: 0.05, r_squared: 0.99, min_points: 5 }
    }
}

pub fn scaling_row(
    label: impl Into<String>,
    kind: ScalingKind,
    target: f64,
    deltas: &[f64],
    values: Vec<f64>,
    tol: &FitTolerances,
) -> ScalingRow {
    let degenerate = values.iter().all(|v| *v <= ZERO_FLOOR);
    let fit = fit_loglog(deltas, &values);
    let band = (!degenerate).then(|| {
        let ratios: Vec<f64> =
            deltas.iter().zip(&values).filter(|(_, v)| **v > ZERO_FLOOR).map(|(d, v)| v / d.powf(target)).collect();
        (ratios.iter().copied().fold(f64::INFINITY, f64::min), ratios.iter().copied().fold(0.0, f64::max))
    });
    let passed = match (kind, &fit) {
        // Identically zero is consistent with an upper bound, never with a two-sided estimate.
        (ScalingKind::UpperBound, _) if degenerate => true,
        (ScalingKind::UpperBound, Some(f)) => f.points >= tol.min_points && f.slope >= target - tol.slope,
        (ScalingKind::TwoSided, Some(f)) => {
            f.points >= tol.min_points && (f.slope - target).abs() <= tol.slope && f.r_squared >= tol.r_squared
        }
        _ => false,
    };
    ScalingRow { label: label.into(), kind, target, values, fit, band, degenerate, passed }
}
