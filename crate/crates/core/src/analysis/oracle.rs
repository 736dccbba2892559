//! Brute-force Fourier-space oracles on small one-dimensional grids.
//!
//! These evaluate the Duhamel integrals and the low-regularity approximation
//! as explicit sums over mode triples/pairs, without FFTs or physical-space
//! products. Output modes are wrapped into `{-K, ..., K-1}` so that the sums
//! describe the same (aliased) discrete nonlinearity as the pseudospectral
//! steppers.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Field, TorusGrid};

/// Largest `K` accepted by the O(K^3) cubic oracles.
pub const CUBIC_ORACLE_MAX_K: usize = 16;
/// Largest `K` accepted by the O(K^2) quadratic oracle.
pub const QUAD_ORACLE_MAX_K: usize = 64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn check_grid(grid: &TorusGrid, limit: usize) -> Result<()> {
    if grid.dim() != 1 {
        return Err(Error::InvalidArgument("oracles are one-dimensional".into()));
    }
    if grid.k_max() > limit {
        return Err(Error::OracleGridTooLarge {
            k: grid.k_max(),
            limit,
        });
    }
    Ok(())
}

fn wrap(k: i64, k_max: i64) -> i64 {
    (k + k_max).rem_euclid(2 * k_max) - k_max
}

/// `int_0^tau e^{i omega s} ds`.
fn exact_phase_integral(omega: i64, tau: f64) -> Complex64 {
    if omega == 0 {
        return Complex64::new(tau, 0.0);
    }
    let w = omega as f64;
    Complex64::new((w * tau).sin(), 1.0 - (w * tau).cos()) / w
}

/// `tau * phi1(2 i tau k^2)` written as `int_0^tau e^{2 i s k^2} ds`
/// via sine/cosine, independent of the production `phi1`.
fn dominant_phase_integral(k: i64, tau: f64) -> Complex64 {
    exact_phase_integral(2 * k * k, tau)
}

struct Modes {
    k_max: i64,
    ks: Vec<i64>,
    coeffs: Vec<Complex64>,
}

impl Modes {
    fn of(w: &Field) -> Self {
        let grid = w.grid();
        let coeffs = w.coefficients().into_owned();
        Modes {
            k_max: grid.k_max() as i64,
            ks: (0..grid.len()).map(|i| grid.axis_wavenumber(i, 0)).collect(),
            coeffs,
        }
    }

    fn index(&self, k: i64) -> usize {
        k.rem_euclid(2 * self.k_max) as usize
    }
}

fn cubic_sum(w: &Field, t_n: f64, kernel: impl Fn(i64, i64) -> Complex64) -> Result<Field> {
    check_grid(w.grid(), CUBIC_ORACLE_MAX_K)?;
    let m = Modes::of(w);
    let mut out = vec![Complex64::default(); m.ks.len()];
    for (i1, &k1) in m.ks.iter().enumerate() {
        let c1 = m.coeffs[i1].conj();
        if c1 == Complex64::default() {
            continue;
        }
        for (i2, &k2) in m.ks.iter().enumerate() {
            let c12 = c1 * m.coeffs[i2];
            for (i3, &k3) in m.ks.iter().enumerate() {
                let l = wrap(-k1 + k2 + k3, m.k_max);
                let omega = l * l + k1 * k1 - k2 * k2 - k3 * k3;
                let phase = Complex64::from_polar(1.0, t_n * omega as f64);
                out[m.index(l)] += phase * kernel(k1, omega) * c12 * m.coeffs[i3];
            }
        }
    }
    Field::from_coefficients(w.grid(), out)
}

/// Exact cubic Duhamel integral
/// `I(w, t_n) = int_0^tau e^{-i(t_n+s)Δ}[conj(e^{i(t_n+s)Δ}w)(e^{i(t_n+s)Δ}w)^2] ds`
/// summed mode by mode.
pub fn oracle_cubic_integral(w: &Field, t_n: f64, tau: f64) -> Result<Field> {
    cubic_sum(w, t_n, |_, omega| exact_phase_integral(omega, tau))
}

/// The low-regularity approximation of [`oracle_cubic_integral`], in which
/// only the dominant phase `2 k_1^2` is integrated exactly.
pub fn oracle_cubic_dominant(w: &Field, t_n: f64, tau: f64) -> Result<Field> {
    cubic_sum(w, t_n, |k1, _| dominant_phase_integral(k1, tau))
}

/// One low-regularity step (`p = 1`) in the twisted variable, by explicit
/// triple sum: `v - i mu tau sum e^{i t_n omega} phi1(2 i tau k_1^2) ...`.
pub fn oracle_cubic_step(v: &Field, t_n: f64, tau: f64, mu: f64) -> Result<Field> {
    let dominant = oracle_cubic_dominant(v, t_n, tau)?;
    let base = v.coefficients();
    let out = base
        .iter()
        .zip(dominant.data())
        .map(|(a, b)| a - I * mu * b)
        .collect();
    Field::from_coefficients(v.grid(), out)
}

/// Exact Duhamel integral of the quadratic nonlinearity:
/// `u^2` when `conjugated` is false, `|u|^2` otherwise.
pub fn oracle_quad_integral(w: &Field, t_n: f64, tau: f64, conjugated: bool) -> Result<Field> {
    check_grid(w.grid(), QUAD_ORACLE_MAX_K)?;
    let m = Modes::of(w);
    let mut out = vec![Complex64::default(); m.ks.len()];
    for (i1, &k1) in m.ks.iter().enumerate() {
        for (i2, &k2) in m.ks.iter().enumerate() {
            let (l, omega, product) = if conjugated {
                let l = wrap(k1 - k2, m.k_max);
                (l, l * l - k1 * k1 + k2 * k2, m.coeffs[i1] * m.coeffs[i2].conj())
            } else {
                let l = wrap(k1 + k2, m.k_max);
                (l, l * l - k1 * k1 - k2 * k2, m.coeffs[i1] * m.coeffs[i2])
            };
            let phase = Complex64::from_polar(1.0, t_n * omega as f64);
            out[m.index(l)] += phase * exact_phase_integral(omega, tau) * product;
        }
    }
    Field::from_coefficients(w.grid(), out)
}

/// Applies `e^{itΔ}` by direct per-mode phases (`e^{-itk^2}`).
pub fn oracle_free_flow(w: &Field, t: f64) -> Result<Field> {
    let grid: &Arc<TorusGrid> = w.grid();
    let out = w
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = grid.axis_wavenumber(i, 0) as f64;
            c * Complex64::from_polar(1.0, -t * k * k)
        })
        .collect();
    Field::from_coefficients(grid, out)
}
