use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Default cap on `dim * log2(2K)`, i.e. at most 2^24 grid points.
pub const DEFAULT_MAX_LOG2_POINTS: u32 = 24;

/// Discretization of the d-dimensional torus `[-pi, pi)^d` with `2K` Fourier
/// modes per axis.
///
/// Grid points are `x_j = (-1 + j/K) pi`, `j = 0, ..., 2K-1` on each axis,
/// and fields expand as `u(x_j) = sum_k u_hat_k exp(i k . x_j)` over the
/// wavenumbers `k` in `{-K, ..., K-1}^d`. Coefficients are stored in
/// FFT-natural order per axis, `{0, 1, ..., K-1, -K, ..., -1}`, flattened
/// row-major with the last axis contiguous.
pub struct TorusGrid {
    dim: usize,
    k_max: usize,
    modes: usize,
    len: usize,
    norm_sq: Vec<i64>,
    laplacian: Vec<f64>,
    // (-1)^(k_1 + ... + k_d): accounts for the -pi offset of the sample points.
    offset_sign: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("dim", &self.dim)
            .field("k_max", &self.k_max)
            .finish_non_exhaustive()
    }
}

/// Builds a grid with the default memory budget.
pub fn make_grid(dim: usize, k_max: usize) -> Result<Arc<TorusGrid>> {
    TorusGrid::with_budget(dim, k_max, DEFAULT_MAX_LOG2_POINTS).map(Arc::new)
}

impl TorusGrid {
    pub fn with_budget(dim: usize, k_max: usize, max_log2_points: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be at least 1".into()));
        }
        if k_max < 2 || !k_max.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "K must be a power of two and at least 2, got {k_max}"
            )));
        }
        let modes = 2 * k_max;
        let log2_points = dim as u64 * u64::from(modes.trailing_zeros());
        if log2_points > u64::from(max_log2_points) {
            return Err(Error::InvalidGrid(format!(
                "d * log2(2K) = {log2_points} exceeds the budget of {max_log2_points}"
            )));
        }
        let len = modes.pow(dim as u32);

        let mut norm_sq = Vec::with_capacity(len);
        let mut offset_sign = Vec::with_capacity(len);
        let mut multi = vec![0usize; dim];
        for _ in 0..len {
            let mut sq = 0i64;
            let mut sum = 0i64;
            for &i in &multi {
                let k = natural_wavenumber(i, k_max);
                sq += k * k;
                sum += k;
            }
            norm_sq.push(sq);
            offset_sign.push(if sum.rem_euclid(2) == 0 { 1.0 } else { -1.0 });
            // odometer increment, last axis fastest
            for a in (0..dim).rev() {
                multi[a] += 1;
                if multi[a] < modes {
                    break;
                }
                multi[a] = 0;
            }
        }
        let laplacian = norm_sq.iter().map(|&s| -(s as f64)).collect();

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(modes);
        let inverse = planner.plan_fft_inverse(modes);

        Ok(TorusGrid {
            dim,
            k_max,
            modes,
            len,
            norm_sq,
            laplacian,
            offset_sign,
            forward,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Largest mode `K`.
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Modes (and grid points) per axis, `2K`.
    pub fn modes_per_axis(&self) -> usize {
        self.modes
    }

    /// Total number of grid points / coefficients.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Per-axis wavenumbers in storage order.
    pub fn wavenumbers(&self) -> Vec<i64> {
        (0..self.modes)
            .map(|i| natural_wavenumber(i, self.k_max))
            .collect()
    }

    /// `|k|^2` per flat index, exact.
    pub fn norm_sq(&self) -> &[i64] {
        &self.norm_sq
    }

    /// `-|k|^2` per flat index.
    pub fn laplacian_symbol(&self) -> &[f64] {
        &self.laplacian
    }

    /// Multi-index of the wavenumber stored at `flat`.
    pub fn multi_index(&self, flat: usize) -> Vec<i64> {
        let mut out = vec![0i64; self.dim];
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            out[a] = natural_wavenumber(rest % self.modes, self.k_max);
            rest /= self.modes;
        }
        out
    }

    /// Flat storage index of wavenumber `k`, wrapping components into
    /// `{-K, ..., K-1}`.
    pub fn flat_index(&self, k: &[i64]) -> usize {
        assert_eq!(k.len(), self.dim, "multi-index has wrong dimension");
        let n = self.modes as i64;
        k.iter()
            .fold(0usize, |acc, &ka| acc * self.modes + ka.rem_euclid(n) as usize)
    }

    /// Wavenumber component along `axis` at flat index `flat`.
    pub fn axis_wavenumber(&self, flat: usize, axis: usize) -> i64 {
        let stride = self.modes.pow((self.dim - 1 - axis) as u32);
        natural_wavenumber((flat / stride) % self.modes, self.k_max)
    }

    /// Sample point coordinates `x_j` along one axis.
    pub fn axis_points(&self) -> Vec<f64> {
        let k = self.k_max as f64;
        (0..self.modes)
            .map(|j| (-1.0 + j as f64 / k) * std::f64::consts::PI)
            .collect()
    }

    /// Physical coordinates of flat sample index `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let pts = self.axis_points();
        let mut out = vec![0.0; self.dim];
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            out[a] = pts[rest % self.modes];
            rest /= self.modes;
        }
        out
    }

    pub(crate) fn same_shape(&self, other: &TorusGrid) -> bool {
        self.dim == other.dim && self.k_max == other.k_max
    }

    pub(crate) fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                lhs_dim: self.dim,
                lhs_k: self.k_max,
                rhs_dim: other.dim,
                rhs_k: other.k_max,
            })
        }
    }

    /// Samples to coefficients, in place.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        self.transform_all_axes(buf, &self.forward);
        let scale = 1.0 / self.len as f64;
        for (c, s) in buf.iter_mut().zip(&self.offset_sign) {
            *c *= scale * s;
        }
    }

    /// Coefficients to samples, in place.
    pub fn backward_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        for (c, s) in buf.iter_mut().zip(&self.offset_sign) {
            *c *= *s;
        }
        self.transform_all_axes(buf, &self.inverse);
    }

    fn transform_all_axes(&self, buf: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.modes;
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        // last axis is contiguous: rustfft handles the batch directly
        fft.process_with_scratch(buf, &mut scratch);
        if self.dim == 1 {
            return;
        }
        let mut line = vec![Complex64::default(); n];
        for axis in 0..self.dim - 1 {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            for start in (0..self.len).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (i, v) in line.iter_mut().enumerate() {
                        *v = buf[base + i * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (i, v) in line.iter().enumerate() {
                        buf[base + i * stride] = *v;
                    }
                }
            }
        }
    }
}

fn natural_wavenumber(i: usize, k_max: usize) -> i64 {
    if i < k_max {
        i as i64
    } else {
        i as i64 - 2 * k_max as i64
    }
}
