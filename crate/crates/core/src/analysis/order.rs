use std::ops::Range;

use crate::error::{Error, Result};

/// Least-squares slope of `log(error)` against `log(tau)` over `window`.
pub fn estimate_order(taus: &[f64], errors: &[f64], window: Range<usize>) -> Result<f64> {
    if taus.len() != errors.len() {
        return Err(Error::InvalidArgument(format!(
            "{} step sizes but {} errors",
            taus.len(),
            errors.len()
        )));
    }
    if window.end > taus.len() || window.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "slope window {window:?} needs at least 3 of {} points",
            taus.len()
        )));
    }
    let points: Vec<(f64, f64)> = window
        .map(|i| (taus[i], errors[i]))
        .collect();
    fit_log_log(&points)
}

/// Least-squares slope through `(tau, error)` pairs on log-log axes.
pub fn fit_log_log(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(tau, err)) = points
        .iter()
        .find(|(t, e)| !(*t > 0.0 && *e > 0.0 && t.is_finite() && e.is_finite()))
    {
        return Err(Error::InvalidArgument(format!(
            "log-log fit needs positive finite data, got tau={tau}, error={err}"
        )));
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (t, e)| (a + t.ln(), b + e.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(a, b), (t, e)| {
        let dx = t.ln() - mx;
        (a + dx * (e.ln() - my), b + dx * dx)
    });
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all step sizes are equal".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder() -> Vec<f64> {
        (1..=8).map(|j| 2f64.powi(-j)).collect()
    }

    #[test]
    fn exact_power_laws() {
        let taus = ladder();
        for (c, q) in [(0.3, 1.0), (0.3, 2.0), (5.0, 0.5)] {
            let errs: Vec<f64> = taus.iter().map(|t| c * t.powf(q)).collect();
            let s = estimate_order(&taus, &errs, 0..taus.len()).unwrap();
            assert!((s - q).abs() < 1e-10, "q = {q}: {s}");
            let s = estimate_order(&taus, &errs, 2..6).unwrap();
            assert!((s - q).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let taus = ladder();
        let mut errs: Vec<f64> = taus.clone();
        assert!(estimate_order(&taus, &errs, 0..2).is_err());
        assert!(estimate_order(&taus, &errs, 4..9).is_err());
        errs[3] = 0.0;
        assert!(estimate_order(&taus, &errs, 0..8).is_err());
        assert!(estimate_order(&taus, &errs, 4..8).is_ok());
        assert!(estimate_order(&[0.1; 3], &[1.0, 2.0, 3.0], 0..3).is_err());
    }
}
