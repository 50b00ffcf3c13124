//! Log-log least-squares exponent fitting.

use serde::Serialize;

use crate::error::{Error, Result};

/// `ln y ≈ slope · ln x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Residual sum of squares in log space.
    pub rss: f64,
    pub points: usize,
}

/// Ordinary least squares on `(ln x, ln y)`. Needs two distinct positive `x`.
pub fn fit_power_law(data: &[(f64, f64)]) -> Result<ExponentFit> {
    if data.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::InsufficientFitData);
    }
    let pts: Vec<(f64, f64)> = data.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len();
    if n < 2 {
        return Err(Error::InsufficientFitData);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientFitData);
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Ok(ExponentFit { slope, intercept, rss, points: n })
}
