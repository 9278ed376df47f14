use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub p1: f64,
    pub p0: f64,
    /// Sum of squared residuals over the averaged points.
    pub residual: f64,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.p1 * x + self.p0
    }
}

/// Averages points sharing an abscissa, in first-seen order.
pub fn average_by_x(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for &(x, y) in points {
        match groups.iter_mut().find(|g| g.0 == x) {
            Some(g) => {
                g.1 += y;
                g.2 += 1;
            }
            None => groups.push((x, y, 1)),
        }
    }
    groups.into_iter().map(|(x, s, n)| (x, s / n as f64)).collect()
}

/// Least-squares line through the per-abscissa means.
pub fn fit_depths(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Fit("non-finite data point".into()));
    }
    let avg = average_by_x(points);
    if avg.len() < 2 {
        return Err(Error::Fit(format!("need at least two distinct abscissae, got {}", avg.len())));
    }
    let n = avg.len() as f64;
    let mx = avg.iter().map(|p| p.0).sum::<f64>() / n;
    let my = avg.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = avg.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = avg.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let p1 = sxy / sxx;
    let p0 = my - p1 * mx;
    let residual = avg.iter().map(|p| (p.1 - p1 * p.0 - p0).powi(2)).sum();
    Ok(FitResult { p1, p0, residual })
}
