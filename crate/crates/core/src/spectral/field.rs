use std::borrow::Cow;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::TorusGrid;
use crate::error::{Error, Result};

/// Which representation a [`Field`] currently holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Physical,
    Fourier,
}

/// A complex-valued state on a [`TorusGrid`].
///
/// Holds exactly one authoritative view; the other is produced on demand by
/// a transform. Operations never mutate their inputs.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<TorusGrid>,
    data: Vec<Complex64>,
    view: View,
}

impl Field {
    pub fn zeros(grid: &Arc<TorusGrid>) -> Self {
        Field {
            grid: grid.clone(),
            data: vec![Complex64::default(); grid.len()],
            view: View::Fourier,
        }
    }

    pub fn from_samples(grid: &Arc<TorusGrid>, samples: Vec<Complex64>) -> Result<Self> {
        Self::new(grid, samples, View::Physical)
    }

    pub fn from_coefficients(grid: &Arc<TorusGrid>, coefficients: Vec<Complex64>) -> Result<Self> {
        Self::new(grid, coefficients, View::Fourier)
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: &Arc<TorusGrid>, f: impl Fn(&[f64]) -> Complex64) -> Self {
        let samples = (0..grid.len()).map(|j| f(&grid.point(j))).collect();
        Field {
            grid: grid.clone(),
            data: samples,
            view: View::Physical,
        }
    }

    fn new(grid: &Arc<TorusGrid>, data: Vec<Complex64>, view: View) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                grid.len(),
                data.len()
            )));
        }
        Ok(Field {
            grid: grid.clone(),
            data,
            view,
        })
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn view(&self) -> View {
        self.view
    }

    /// Raw values of the current view.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> (Vec<Complex64>, View) {
        (self.data, self.view)
    }

    pub fn to_fourier(&self) -> Field {
        self.clone().into_fourier()
    }

    pub fn to_physical(&self) -> Field {
        self.clone().into_physical()
    }

    pub fn into_fourier(mut self) -> Field {
        if self.view == View::Physical {
            self.grid.forward_in_place(&mut self.data);
            self.view = View::Fourier;
        }
        self
    }

    pub fn into_physical(mut self) -> Field {
        if self.view == View::Fourier {
            self.grid.backward_in_place(&mut self.data);
            self.view = View::Physical;
        }
        self
    }

    /// Fourier coefficients in storage order, transforming if needed.
    pub fn coefficients(&self) -> Cow<'_, [Complex64]> {
        match self.view {
            View::Fourier => Cow::Borrowed(&self.data),
            View::Physical => Cow::Owned(self.to_fourier().data),
        }
    }

    /// Grid samples, transforming if needed.
    pub fn samples(&self) -> Cow<'_, [Complex64]> {
        match self.view {
            View::Physical => Cow::Borrowed(&self.data),
            View::Fourier => Cow::Owned(self.to_physical().data),
        }
    }

    /// Coefficient of wavenumber `k` (components wrapped into `{-K..K-1}`).
    pub fn coefficient(&self, k: &[i64]) -> Complex64 {
        self.coefficients()[self.grid.flat_index(k)]
    }

    pub fn scale(&self, factor: Complex64) -> Field {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// `self - other`, returned in the Fourier view.
    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.grid.check_same(&other.grid)?;
        let a = self.coefficients();
        let b = other.coefficients();
        let data = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
        Ok(Field {
            grid: self.grid.clone(),
            data,
            view: View::Fourier,
        })
    }

    /// Discrete mass `sum_k |u_hat_k|^2`.
    pub fn mass(&self) -> f64 {
        self.coefficients().iter().map(|c| c.norm_sqr()).sum()
    }

    /// `max_j |u(x_j)|`.
    pub fn max_abs(&self) -> f64 {
        self.samples().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}
