use serde::{Deserialize, Serialize};

use super::order::fit_log_log;
use crate::integrators::SchemeKind;

/// One `(scheme, tau)` measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub scheme: SchemeKind,
    pub tau: f64,
    pub n_steps: usize,
    /// Time at which the error is measured, `n_steps * tau`.
    pub t_final: f64,
    /// `NaN` when the run failed.
    pub error: f64,
    pub norm_r: f64,
    pub failed: bool,
    pub failure: Option<String>,
    /// The error is too close to the reference accuracy to be trusted.
    pub below_reference_floor: bool,
    pub wall_seconds: f64,
}

/// Trims applied to a scheme's ladder before fitting a slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeWindow {
    pub drop_largest: usize,
    pub drop_smallest: usize,
}

impl Default for SlopeWindow {
    fn default() -> Self {
        SlopeWindow {
            drop_largest: 2,
            drop_smallest: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedSlope {
    pub scheme: SchemeKind,
    /// `None` when fewer than three usable rows remain in the window.
    pub slope: Option<f64>,
    pub points_used: usize,
    pub tau_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub rows: Vec<ErrorRow>,
    pub fitted_slopes: Vec<FittedSlope>,
}

impl ErrorTable {
    pub fn rows_for(&self, scheme: SchemeKind) -> impl Iterator<Item = &ErrorRow> {
        self.rows.iter().filter(move |r| r.scheme == scheme)
    }

    pub fn slope(&self, scheme: SchemeKind) -> Option<f64> {
        self.fitted_slopes
            .iter()
            .find(|s| s.scheme == scheme)
            .and_then(|s| s.slope)
    }

    /// Fits one slope per scheme in `schemes`.
    ///
    /// Rows are ordered by decreasing `tau`; the window trims the largest and
    /// smallest rungs, then failed and floor-flagged rows are skipped.
    pub fn fit_slopes(&mut self, schemes: &[SchemeKind], window: SlopeWindow) {
        self.fitted_slopes = schemes
            .iter()
            .map(|&scheme| {
                let mut rows: Vec<&ErrorRow> = self.rows_for(scheme).collect();
                rows.sort_by(|a, b| b.tau.total_cmp(&a.tau));
                let end = rows.len().saturating_sub(window.drop_smallest);
                let start = window.drop_largest.min(end);
                let points: Vec<(f64, f64)> = rows[start..end]
                    .iter()
                    .filter(|r| !r.failed && !r.below_reference_floor && r.error > 0.0)
                    .map(|r| (r.tau, r.error))
                    .collect();
                let slope = fit_log_log(&points).ok();
                let tau_range = match (points.first(), points.last()) {
                    (Some(a), Some(b)) => Some((b.0, a.0)),
                    _ => None,
                };
                FittedSlope {
                    scheme,
                    slope,
                    points_used: points.len(),
                    tau_range,
                }
            })
            .collect();
    }
}
