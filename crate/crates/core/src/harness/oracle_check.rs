use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{
    oracle_cubic_step, oracle_free_flow, oracle_quad_integral, uniform_draw,
};
use crate::error::Result;
use crate::integrators::{step_lowreg, step_quad_abs2, step_quad_u2, SchemeKind, SchemeSpec};
use crate::spectral::{apply, free_flow, make_grid, Field, TorusGrid};

pub const ORACLE_TOLERANCE: f64 = 1e-12;
const SEED: u64 = 0x5eed;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Serialize)]
pub struct OracleDeviation {
    pub check: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl OracleDeviation {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tolerance
    }
}

/// Deterministic random coefficients in `[-1/2, 1/2)^2`. With `band_limited`
/// only `|k| < K/2` is populated, so quadratic products are alias-free.
pub fn random_coefficients(grid: &Arc<TorusGrid>, seed: u64, band_limited: bool) -> Field {
    let half = grid.k_max() as i64 / 2;
    let coeffs = (0..grid.len())
        .map(|i| {
            if band_limited && grid.axis_wavenumber(i, 0).abs() >= half {
                return Complex64::default();
            }
            let j = 2 * i as u64;
            Complex64::new(uniform_draw(seed, j) - 0.5, uniform_draw(seed, j + 1) - 0.5)
        })
        .collect();
    Field::from_coefficients(grid, coeffs).expect("length matches grid")
}

fn max_deviation(a: &Field, b: &Field) -> f64 {
    a.coefficients()
        .iter()
        .zip(b.coefficients().iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Compares the production steppers with the brute-force Fourier sums on a
/// one-dimensional grid with `K = k_max`.
pub fn oracle_check(k_max: usize) -> Result<Vec<OracleDeviation>> {
    let grid = make_grid(1, k_max)?;
    let mut report = Vec::new();
    let mut record = |check: String, max_deviation: f64| {
        report.push(OracleDeviation {
            check,
            max_deviation,
            tolerance: ORACLE_TOLERANCE,
        })
    };

    let (mu, tau) = (1.0, 0.1);
    let w = random_coefficients(&grid, SEED, false);
    let spec = SchemeSpec::power(SchemeKind::LowRegExp, mu, 1.0, tau);
    for t_n in [0.0, 0.37] {
        let u = oracle_free_flow(&w, t_n)?;
        let scheme = step_lowreg(&u, t_n, &spec)?;
        let oracle = oracle_free_flow(&oracle_cubic_step(&w, t_n, tau, mu)?, t_n + tau)?;
        record(format!("LowRegExp p=1 vs triple sum, t_n={t_n}"), max_deviation(&scheme, &oracle));
    }

    let free = apply(&free_flow(&grid, 0.37), &w)?;
    record("free flow vs per-mode phases".into(), max_deviation(&free, &oracle_free_flow(&w, 0.37)?));

    let w = random_coefficients(&grid, SEED + 1, true);
    let flow = |f: &Field| oracle_free_flow(f, tau);
    let integral = oracle_quad_integral(&w, 0.0, tau, false)?;
    let oracle = flow(&w.sub(&integral.scale(I * mu))?)?;
    let scheme = step_quad_u2(&w, 0.0, &SchemeSpec::square(SchemeKind::QuadU2, mu, tau))?;
    record("QuadU2 vs pair sum (band-limited)".into(), max_deviation(&scheme, &oracle));

    let integral = oracle_quad_integral(&w, 0.0, tau, true)?;
    let oracle = flow(&w.sub(&integral.scale(I * mu))?)?;
    let scheme = step_quad_abs2(&w, 0.0, &SchemeSpec::abs_square(SchemeKind::QuadAbsU2, mu, tau))?;
    record("QuadAbsU2 vs pair sum (band-limited)".into(), max_deviation(&scheme, &oracle));

    Ok(report)
}
