//! Initial data: seeded rough fields, smooth two-mode fields, plane waves.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, TorusGrid};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Counter-based uniform generator on `[0, 1)`.
///
/// Draw `i` for seed `s` is
///
/// ```text
/// z = s + (i + 1) * 0x9E3779B97F4A7C15          (wrapping)
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9      (wrapping)
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB      (wrapping)
/// z = z ^ (z >> 31)
/// u = (z >> 11) * 2^-53
/// ```
///
/// i.e. the SplitMix64 output function evaluated at counter `i`. Only integer
/// operations and one exact scaling are involved, so streams are identical
/// on every platform and draws can be taken in any order.
pub fn uniform_draw(seed: u64, index: u64) -> f64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Parameters of a rough random initial value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughDataSpec {
    /// Smoothing exponent: coefficient `k` is damped by `|k|^{-theta}`.
    pub theta: f64,
    pub seed: u64,
    /// Grid half-size `K`; must match the grid.
    #[serde(rename = "K")]
    pub k_max: usize,
    /// Scale to unit discrete L2 norm.
    pub normalize: bool,
    /// Keep the mean of the raw samples instead of zeroing mode 0. Only
    /// meaningful with `theta = 0`, where it reproduces the undamped
    /// uniform samples.
    #[serde(default)]
    pub keep_mean: bool,
}

impl RoughDataSpec {
    pub fn new(theta: f64, seed: u64, k_max: usize) -> Self {
        RoughDataSpec {
            theta,
            seed,
            k_max,
            normalize: true,
            keep_mean: false,
        }
    }
}

/// The raw samples `rand(2K) + i rand(2K)`: real parts use counters
/// `0..2K`, imaginary parts `2K..4K`.
pub fn raw_uniform_samples(seed: u64, k_max: usize) -> Vec<Complex64> {
    let n = 2 * k_max as u64;
    (0..n)
        .map(|j| Complex64::new(uniform_draw(seed, j), uniform_draw(seed, n + j)))
        .collect()
}

/// Rough random field with coefficients `|k|^{-theta} FFT(U)_k` (zero mean),
/// returned in the Fourier view.
pub fn generate_rough_data(spec: &RoughDataSpec, grid: &Arc<TorusGrid>) -> Result<Field> {
    if grid.dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "rough data is defined on one-dimensional grids, got d={}",
            grid.dim()
        )));
    }
    if spec.k_max != grid.k_max() {
        return Err(Error::InvalidArgument(format!(
            "rough data K={} does not match grid K={}",
            spec.k_max,
            grid.k_max()
        )));
    }
    if !(spec.theta >= 0.0) {
        return Err(Error::InvalidArgument(format!("theta must be >= 0, got {}", spec.theta)));
    }
    let mut coeffs = raw_uniform_samples(spec.seed, spec.k_max);
    grid.forward_in_place(&mut coeffs);
    for (flat, c) in coeffs.iter_mut().enumerate() {
        let k = grid.axis_wavenumber(flat, 0);
        if k == 0 {
            if !spec.keep_mean {
                *c = Complex64::default();
            }
        } else if spec.theta != 0.0 {
            *c *= (k.unsigned_abs() as f64).powf(-spec.theta);
        }
    }
    if spec.normalize {
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            coeffs.iter_mut().for_each(|c| *c /= norm);
        }
    }
    Field::from_coefficients(grid, coeffs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothKind {
    /// `sin x cos x`, normalized to unit L2 norm.
    SinCos,
    /// `sin x`, unnormalized.
    Sin,
}

/// Exact two-mode smooth initial values in the Fourier view.
pub fn smooth_data(kind: SmoothKind, grid: &Arc<TorusGrid>) -> Result<Field> {
    if grid.dim() != 1 {
        return Err(Error::InvalidArgument("smooth data is one-dimensional".into()));
    }
    let mut coeffs = vec![Complex64::default(); grid.len()];
    match kind {
        SmoothKind::SinCos => {
            // sin x cos x = sin(2x)/2, coefficients -+ i/4 at +-2, norm^2 = 1/8
            let a = 8f64.sqrt() * 0.25;
            coeffs[grid.flat_index(&[2])] = Complex64::new(0.0, -a);
            coeffs[grid.flat_index(&[-2])] = Complex64::new(0.0, a);
        }
        SmoothKind::Sin => {
            coeffs[grid.flat_index(&[1])] = Complex64::new(0.0, -0.5);
            coeffs[grid.flat_index(&[-1])] = Complex64::new(0.0, 0.5);
        }
    }
    Field::from_coefficients(grid, coeffs)
}

/// `amplitude * exp(i k . x)`.
pub fn plane_wave(grid: &Arc<TorusGrid>, k: &[i64], amplitude: Complex64) -> Field {
    let mut coeffs = vec![Complex64::default(); grid.len()];
    coeffs[grid.flat_index(k)] = amplitude;
    Field::from_coefficients(grid, coeffs).expect("sized to grid")
}

/// Exact solution of `i u_t = -Δu + mu |u|^{2p} u` from a plane wave:
/// `A exp(i(k.x - omega t))` with `omega = |k|^2 + mu |A|^{2p}`.
pub fn exact_plane_wave(
    grid: &Arc<TorusGrid>,
    k: &[i64],
    amplitude: Complex64,
    mu: f64,
    p: f64,
    t: f64,
) -> Field {
    let k2: i64 = k.iter().map(|x| x * x).sum();
    let omega = k2 as f64 + mu * amplitude.norm().powf(2.0 * p);
    plane_wave(grid, k, amplitude * Complex64::from_polar(1.0, -omega * t))
}
