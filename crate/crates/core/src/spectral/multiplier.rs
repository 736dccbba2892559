use std::sync::Arc;

use num_complex::Complex64;

use super::field::{Field, View};
use super::grid::TorusGrid;
use crate::error::{Error, Result};

/// Arguments below this modulus use the Taylor series of `phi1`.
pub const PHI1_SERIES_RADIUS: f64 = 1e-8;

/// `phi1(z) = (e^z - 1) / z`, with `phi1(0) = 1`.
///
/// Away from zero the numerator is evaluated as a complex `expm1`, so the
/// result keeps full relative accuracy for small but non-tiny arguments too.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < PHI1_SERIES_RADIUS {
        // 1 + z/2 + z^2/6 + z^3/24
        return Complex64::new(1.0, 0.0) + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    }
    let (x, y) = (z.re, z.im);
    let half = (0.5 * y).sin();
    let expm1 = Complex64::new(
        x.exp_m1() * y.cos() - 2.0 * half * half,
        x.exp() * y.sin(),
    );
    expm1 / z
}

/// A diagonal Fourier operator: `(M u)^_k = m_k u_hat_k`.
#[derive(Debug, Clone)]
pub struct Multiplier {
    grid: Arc<TorusGrid>,
    symbol: Vec<Complex64>,
    label: String,
}

impl Multiplier {
    pub fn from_symbol(grid: &Arc<TorusGrid>, symbol: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if symbol.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "symbol has {} entries, grid has {}",
                symbol.len(),
                grid.len()
            )));
        }
        Ok(Multiplier {
            grid: grid.clone(),
            symbol,
            label: label.into(),
        })
    }

    pub fn identity(grid: &Arc<TorusGrid>) -> Self {
        Multiplier {
            grid: grid.clone(),
            symbol: vec![Complex64::new(1.0, 0.0); grid.len()],
            label: "identity".into(),
        }
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn symbol(&self) -> &[Complex64] {
        &self.symbol
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &Multiplier) -> Result<Multiplier> {
        self.grid.check_same(&other.grid)?;
        let symbol = self
            .symbol
            .iter()
            .zip(&other.symbol)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Multiplier {
            grid: self.grid.clone(),
            symbol,
            label: format!("{}∘{}", self.label, other.label),
        })
    }

    /// Multiplies a coefficient buffer in place.
    pub(crate) fn apply_in_place(&self, coeffs: &mut [Complex64]) {
        debug_assert_eq!(coeffs.len(), self.symbol.len());
        for (c, m) in coeffs.iter_mut().zip(&self.symbol) {
            *c *= m;
        }
    }

    /// Multiplies into a fresh buffer.
    pub(crate) fn applied(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        coeffs.iter().zip(&self.symbol).map(|(c, m)| c * m).collect()
    }
}

/// Applies `m` to `f`; the result is in the Fourier view.
pub fn apply(m: &Multiplier, f: &Field) -> Result<Field> {
    m.grid.check_same(f.grid())?;
    let mut data = f.coefficients().into_owned();
    m.apply_in_place(&mut data);
    let out = Field::from_coefficients(f.grid(), data)?;
    debug_assert_eq!(out.view(), View::Fourier);
    Ok(out)
}

/// The free Schrödinger group `e^{itΔ}`, symbol `e^{-it|k|^2}`.
pub fn free_flow(grid: &Arc<TorusGrid>, t: f64) -> Multiplier {
    let symbol = grid
        .norm_sq()
        .iter()
        .map(|&s| Complex64::from_polar(1.0, -t * s as f64))
        .collect();
    Multiplier {
        grid: grid.clone(),
        symbol,
        label: format!("free_flow({t})"),
    }
}

/// `phi1(cΔ)`, symbol `phi1(-c|k|^2)` with exact value 1 at `k = 0`.
pub fn phi1_of_scaled_laplacian(grid: &Arc<TorusGrid>, c: Complex64) -> Multiplier {
    let symbol = grid
        .laplacian_symbol()
        .iter()
        .map(|&lap| phi1(c * lap))
        .collect();
    Multiplier {
        grid: grid.clone(),
        symbol,
        label: format!("phi1(({c})Δ)"),
    }
}

/// Regularized `∂_{axis}^{-1}`: symbol `1/(i k_axis)`, zero where `k_axis = 0`.
pub fn inverse_derivative(grid: &Arc<TorusGrid>, axis: usize) -> Result<Multiplier> {
    if axis >= grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "axis {axis} out of range for d={}",
            grid.dim()
        )));
    }
    let symbol = (0..grid.len())
        .map(|flat| match grid.axis_wavenumber(flat, axis) {
            0 => Complex64::default(),
            k => Complex64::new(0.0, -1.0 / k as f64),
        })
        .collect();
    Ok(Multiplier {
        grid: grid.clone(),
        symbol,
        label: format!("inverse_derivative({axis})"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;
    use std::f64::consts::PI;

    fn i() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    #[test]
    fn phi1_closed_forms() {
        assert_eq!(phi1(Complex64::default()), Complex64::new(1.0, 0.0));
        let v = phi1(i() * PI);
        assert!((v - Complex64::new(0.0, 2.0 / PI)).norm() < 1e-15);
        assert!(phi1(i() * 2.0 * PI).norm() < 1e-15);
        // real axis against the naive formula where it is well conditioned
        let z = Complex64::new(1.5, 0.0);
        assert!((phi1(z) - (z.exp() - 1.0) / z).norm() < 1e-14);
        let z = Complex64::new(-0.7, 2.3);
        assert!((phi1(z) - (z.exp() - 1.0) / z).norm() < 1e-14);
    }

    #[test]
    fn phi1_is_continuous_across_series_radius() {
        for &r in &[0.5e-8, 0.999e-8, 1.001e-8, 2e-8, 1e-6] {
            let z = Complex64::from_polar(r, 0.3);
            let series = Complex64::new(1.0, 0.0) + z / 2.0 + z * z / 6.0;
            assert!((phi1(z) - series).norm() < 1e-15, "r = {r}");
        }
    }

    #[test]
    fn free_flow_symbols() {
        let g = make_grid(1, 8).unwrap();
        let id = free_flow(&g, 0.0);
        assert!(id.symbol().iter().all(|m| *m == Complex64::new(1.0, 0.0)));
        let tau = 0.3;
        let m = free_flow(&g, tau);
        let s = m.symbol()[g.flat_index(&[1])];
        assert!((s - Complex64::from_polar(1.0, -tau)).norm() < 1e-16);
        assert!(m.symbol().iter().all(|m| (m.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn free_flow_group_property() {
        let g = make_grid(2, 8).unwrap();
        let (s, t) = (0.37, -1.9);
        let lhs = free_flow(&g, s).compose(&free_flow(&g, t)).unwrap();
        let rhs = free_flow(&g, s + t);
        for (a, b) in lhs.symbol().iter().zip(rhs.symbol()) {
            assert!((a - b).norm() < 1e-12);
        }
        let back = free_flow(&g, t).compose(&free_flow(&g, -t)).unwrap();
        assert!(back.symbol().iter().all(|m| (m - 1.0).norm() < 1e-12));
    }

    #[test]
    fn phi1_multiplier_zero_mode_and_bound() {
        let g = make_grid(1, 64).unwrap();
        for tau in [1e-12, 1e-3, 0.1, 1.0] {
            for c in [Complex64::new(0.0, -2.0 * tau), Complex64::new(0.0, tau)] {
                let m = phi1_of_scaled_laplacian(&g, c);
                assert_eq!(m.symbol()[0], Complex64::new(1.0, 0.0));
                assert!(m.symbol().iter().all(|v| v.norm() <= 1.0 + 1e-15));
            }
        }
        let m = phi1_of_scaled_laplacian(&g, Complex64::default());
        assert!(m.symbol().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn inverse_derivative_on_modes() {
        let g = make_grid(1, 8).unwrap();
        let d = inverse_derivative(&g, 0).unwrap();
        let c = Field::from_samples(&g, vec![Complex64::new(2.0, 1.0); g.len()]).unwrap();
        let out = apply(&d, &c).unwrap();
        assert!(out.data().iter().all(|v| v.norm() == 0.0));

        let e1 = Field::from_fn(&g, |x| (i() * x[0]).exp());
        let out = apply(&d, &e1).unwrap();
        assert!((out.coefficient(&[1]) + i()).norm() < 1e-14);

        let e2 = Field::from_fn(&g, |x| (i() * 2.0 * x[0]).exp());
        let out = apply(&d, &e2).unwrap();
        assert!((out.coefficient(&[2]) + i() * 0.5).norm() < 1e-14);
        assert!(inverse_derivative(&g, 1).is_err());
    }

    #[test]
    fn apply_checks_grid() {
        let g = make_grid(1, 8).unwrap();
        let h = make_grid(1, 16).unwrap();
        let f = Field::zeros(&h);
        assert!(apply(&free_flow(&g, 1.0), &f).is_err());
        let out = apply(&Multiplier::identity(&h), &f).unwrap();
        assert_eq!(out.view(), View::Fourier);
    }
}
