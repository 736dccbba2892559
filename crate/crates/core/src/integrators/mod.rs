//! Time-stepping schemes behind a common single-step interface.
//!
//! All schemes advance `i u_t = -Δu + mu N(u)` on the torus with a fixed step
//! `tau`. The stiff free flow `e^{itΔ}` is always applied exactly in Fourier
//! space; the schemes differ in how they treat the nonlinear Duhamel term.

mod pointwise;
mod spec;
mod stepper;

pub use spec::{Nonlinearity, SchemeKind, SchemeSpec};
pub use stepper::{
    step_classical_exp, step_lie, step_lie_quad, step_lowreg, step_lowreg_twisted, step_quad_abs2,
    step_quad_u2, step_strang, step_strang_quad, Stepper, BLOW_UP_THRESHOLD,
    SINGULAR_DENOMINATOR,
};

use crate::error::{Error, Result};
use crate::spectral::Field;

/// Solution after `step_index` steps of size `tau`.
#[derive(Debug, Clone)]
pub struct StepperState {
    pub u: Field,
    pub t: f64,
    pub step_index: usize,
    /// `max_j |u^n(x_j)|` after each step `n = 1..=step_index`.
    pub max_abs: Vec<f64>,
}

/// Applies `spec` to `u0` `n_steps` times.
///
/// Stepper errors are reported with the 1-based index of the failing step.
/// The run also aborts once `max |u|` exceeds [`BLOW_UP_THRESHOLD`].
pub fn evolve(u0: &Field, spec: &SchemeSpec, n_steps: usize) -> Result<StepperState> {
    spec.validate(u0.grid().dim())?;
    let stepper = Stepper::new(u0.grid(), spec)?;
    evolve_with(&stepper, u0, n_steps)
}

pub(crate) fn evolve_with(stepper: &Stepper, u0: &Field, n_steps: usize) -> Result<StepperState> {
    let grid = stepper.grid().clone();
    grid_check(u0, stepper)?;
    let tau = stepper.spec().tau;
    let mut coeffs = u0.coefficients().into_owned();
    let mut max_abs = Vec::with_capacity(n_steps);
    let mut samples = vec![Default::default(); grid.len()];
    for n in 0..n_steps {
        let t = n as f64 * tau;
        coeffs = stepper
            .step_coefficients(&coeffs, t)
            .map_err(|e| e.at_step(n + 1))?;
        samples.copy_from_slice(&coeffs);
        grid.backward_in_place(&mut samples);
        let peak = samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !(peak <= BLOW_UP_THRESHOLD) {
            return Err(Error::BlowUp {
                step: n + 1,
                max_abs: peak,
            });
        }
        max_abs.push(peak);
    }
    Ok(StepperState {
        u: Field::from_coefficients(&grid, coeffs)?,
        t: n_steps as f64 * tau,
        step_index: n_steps,
        max_abs,
    })
}

fn grid_check(u0: &Field, stepper: &Stepper) -> Result<()> {
    if stepper.grid().dim() != u0.grid().dim() || stepper.grid().k_max() != u0.grid().k_max() {
        return Err(Error::GridMismatch {
            lhs_dim: stepper.grid().dim(),
            lhs_k: stepper.grid().k_max(),
            rhs_dim: u0.grid().dim(),
            rhs_k: u0.grid().k_max(),
        });
    }
    Ok(())
}
