//! Small fitting helpers for convergence traces.

/// Least-squares slope of `ln y` against `ln t`, skipping non-positive or
/// non-finite entries. `None` with fewer than two usable points.
pub fn loglog_slope(t: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Running minimum of a sequence.
pub fn running_min(y: &[f64]) -> Vec<f64> {
    let mut m = f64::INFINITY;
    y.iter()
        .map(|v| {
            m = m.min(*v);
            m
        })
        .collect()
}
