use std::sync::Arc;

use num_complex::Complex64;

use super::pointwise::{complex_power, modulus_power, power_nonlinearity};
use super::spec::{Nonlinearity, SchemeKind, SchemeSpec};
use crate::error::{Error, Result};
use crate::spectral::{
    free_flow, inverse_derivative, phi1_of_scaled_laplacian, Field, Multiplier, TorusGrid,
};

/// Runs abort once `max_j |u(x_j)|` exceeds this.
pub const BLOW_UP_THRESHOLD: f64 = 1e8;

/// Smallest admissible `|1 + i mu tau u|` in the quadratic splitting substep.
pub const SINGULAR_DENOMINATOR: f64 = 1e-10;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A scheme bound to a grid, with all Fourier symbol tables for its step
/// size computed once.
///
/// Steppers are pure: `(u^n, t_n) -> u^{n+1}`. The state is passed around in
/// Fourier coefficients; results come back in the Fourier view.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Arc<TorusGrid>,
    spec: SchemeSpec,
    flow: Multiplier,
    half_flow: Option<Multiplier>,
    backward_flow: Option<Multiplier>,
    phi: Option<Multiplier>,
    inv_dx: Option<Multiplier>,
}

impl Stepper {
    pub fn new(grid: &Arc<TorusGrid>, spec: &SchemeSpec) -> Result<Self> {
        spec.check_stepper(grid.dim())?;
        let tau = spec.tau;
        let flow = free_flow(grid, tau);
        let mut half_flow = None;
        let mut backward_flow = None;
        let mut phi = None;
        let mut inv_dx = None;
        match spec.kind {
            // phi1(-2 i tau Δ)
            SchemeKind::LowRegExp => {
                phi = Some(phi1_of_scaled_laplacian(grid, Complex64::new(0.0, -2.0 * tau)))
            }
            // phi1(i tau Δ)
            SchemeKind::ClassicalExp => {
                phi = Some(phi1_of_scaled_laplacian(grid, Complex64::new(0.0, tau)))
            }
            SchemeKind::StrangSplit | SchemeKind::StrangQuad => {
                half_flow = Some(free_flow(grid, 0.5 * tau))
            }
            SchemeKind::QuadU2 => inv_dx = Some(inverse_derivative(grid, 0)?),
            SchemeKind::QuadAbsU2 => {
                inv_dx = Some(inverse_derivative(grid, 0)?);
                backward_flow = Some(free_flow(grid, -tau));
            }
            SchemeKind::LieSplit | SchemeKind::LieQuad => {}
        }
        Ok(Stepper {
            grid: grid.clone(),
            spec: *spec,
            flow,
            half_flow,
            backward_flow,
            phi,
            inv_dx,
        })
    }

    pub fn spec(&self) -> &SchemeSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    /// One step of the selected scheme in the original variable.
    pub fn step(&self, u: &Field, t: f64) -> Result<Field> {
        self.grid.check_same(u.grid())?;
        let next = self.step_coefficients(&u.coefficients(), t)?;
        Field::from_coefficients(&self.grid, next)
    }

    pub(crate) fn step_coefficients(&self, u_hat: &[Complex64], _t: f64) -> Result<Vec<Complex64>> {
        let out = match self.spec.kind {
            SchemeKind::LowRegExp => self.lowreg(u_hat),
            SchemeKind::ClassicalExp => self.classical_exp(u_hat),
            SchemeKind::LieSplit => self.lie_phase(u_hat),
            SchemeKind::StrangSplit => self.strang_phase(u_hat),
            SchemeKind::QuadU2 => self.quad_square(u_hat),
            SchemeKind::QuadAbsU2 => self.quad_abs_square(u_hat),
            SchemeKind::LieQuad => self.lie_quad(u_hat)?,
            SchemeKind::StrangQuad => self.strang_quad(u_hat)?,
        };
        if out.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::BlowUp {
                step: 0,
                max_abs: f64::INFINITY,
            });
        }
        Ok(out)
    }

    /// One low-regularity step in the twisted variable `v = e^{-itΔ} u`:
    /// `v - i mu tau e^{-itΔ}[(e^{itΔ}v)^{p+1} phi1(-2iτΔ)(e^{-itΔ} conj v)^p]`.
    pub fn step_twisted(&self, v: &Field, t: f64) -> Result<Field> {
        if self.spec.kind != SchemeKind::LowRegExp {
            return Err(Error::InvalidArgument(format!(
                "twisted stepping is defined for LowRegExp, not {}",
                self.spec.kind
            )));
        }
        self.grid.check_same(v.grid())?;
        let v_hat = v.coefficients();
        let twist = free_flow(&self.grid, t);
        let untwist = free_flow(&self.grid, -t);

        let mut u = twist.applied(&v_hat);
        self.grid.backward_in_place(&mut u);
        // e^{-itΔ} conj(v) = conj(e^{itΔ} v)
        let mut nonlinear = self.lowreg_product(&u);
        self.grid.forward_in_place(&mut nonlinear);
        untwist.apply_in_place(&mut nonlinear);

        let factor = -I * self.spec.mu * self.spec.tau;
        let next: Vec<Complex64> = v_hat
            .iter()
            .zip(&nonlinear)
            .map(|(a, b)| a + factor * b)
            .collect();
        if next.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::BlowUp {
                step: 0,
                max_abs: f64::INFINITY,
            });
        }
        Field::from_coefficients(&self.grid, next)
    }

    fn p(&self) -> f64 {
        match self.spec.nonlinearity {
            Nonlinearity::Power { p } => p,
            _ => 1.0,
        }
    }

    fn physical(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut buf = coeffs.to_vec();
        self.grid.backward_in_place(&mut buf);
        buf
    }

    /// Physical samples to physical samples: `u^{p+1} phi1(-2iτΔ)(conj(u)^p)`.
    fn lowreg_product(&self, u: &[Complex64]) -> Vec<Complex64> {
        let p = self.p();
        let phi = self.phi.as_ref().expect("phi table");
        let mut conj_part: Vec<Complex64> =
            u.iter().map(|z| complex_power(z.conj(), p)).collect();
        self.grid.forward_in_place(&mut conj_part);
        phi.apply_in_place(&mut conj_part);
        self.grid.backward_in_place(&mut conj_part);
        u.iter()
            .zip(&conj_part)
            .map(|(z, c)| complex_power(*z, p + 1.0) * c)
            .collect()
    }

    // u^{n+1} = e^{iτΔ}[u - i mu tau u^{p+1} phi1(-2iτΔ)(conj(u)^p)]
    fn lowreg(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let u = self.physical(u_hat);
        let product = self.lowreg_product(&u);
        let factor = -I * self.spec.mu * self.spec.tau;
        let mut w: Vec<Complex64> = u.iter().zip(&product).map(|(a, b)| a + factor * b).collect();
        self.grid.forward_in_place(&mut w);
        self.flow.apply_in_place(&mut w);
        w
    }

    // u^{n+1} = e^{iτΔ}u - i mu tau phi1(iτΔ) N(u)
    fn classical_exp(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let u = self.physical(u_hat);
        let mut n: Vec<Complex64> = match self.spec.nonlinearity {
            Nonlinearity::Power { p } => u.iter().map(|z| power_nonlinearity(*z, p)).collect(),
            Nonlinearity::Square => u.iter().map(|z| z * z).collect(),
            Nonlinearity::AbsSquare => u.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect(),
        };
        self.grid.forward_in_place(&mut n);
        self.phi.as_ref().expect("phi table").apply_in_place(&mut n);
        let factor = -I * self.spec.mu * self.spec.tau;
        u_hat
            .iter()
            .zip(self.flow.symbol())
            .zip(&n)
            .map(|((c, m), nl)| c * m + factor * nl)
            .collect()
    }

    /// In place on physical samples: `u <- exp(-i tau mu |u|^{2p}) u`.
    fn phase_rotation(&self, u: &mut [Complex64]) {
        let p = self.p();
        let scale = -self.spec.tau * self.spec.mu;
        for z in u.iter_mut() {
            *z *= Complex64::from_polar(1.0, scale * modulus_power(*z, p));
        }
    }

    fn lie_phase(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let mut u = self.flow.applied(u_hat);
        self.grid.backward_in_place(&mut u);
        self.phase_rotation(&mut u);
        self.grid.forward_in_place(&mut u);
        u
    }

    fn strang_phase(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let half = self.half_flow.as_ref().expect("half flow");
        let mut u = half.applied(u_hat);
        self.grid.backward_in_place(&mut u);
        self.phase_rotation(&mut u);
        self.grid.forward_in_place(&mut u);
        half.apply_in_place(&mut u);
        u
    }

    /// In place on physical samples: `u <- u / (1 + i mu tau u)`.
    fn rational_substep(&self, u: &mut [Complex64]) -> Result<()> {
        let a = I * self.spec.mu * self.spec.tau;
        for (j, z) in u.iter_mut().enumerate() {
            let den = 1.0 + a * *z;
            let size = den.norm();
            if size < SINGULAR_DENOMINATOR {
                return Err(Error::SingularSubstep {
                    step: 0,
                    point: j,
                    min_denominator: size,
                });
            }
            *z /= den;
        }
        Ok(())
    }

    fn lie_quad(&self, u_hat: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut u = self.physical(u_hat);
        self.rational_substep(&mut u)?;
        self.grid.forward_in_place(&mut u);
        self.flow.apply_in_place(&mut u);
        Ok(u)
    }

    fn strang_quad(&self, u_hat: &[Complex64]) -> Result<Vec<Complex64>> {
        let half = self.half_flow.as_ref().expect("half flow");
        let mut u = half.applied(u_hat);
        self.grid.backward_in_place(&mut u);
        self.rational_substep(&mut u)?;
        self.grid.forward_in_place(&mut u);
        half.apply_in_place(&mut u);
        Ok(u)
    }

    // u^{n+1} = (1 - 2i mu tau u0) e^{iτ∂²}u + i mu tau u0^2
    //         + mu/2 (e^{iτ∂²}∂⁻¹u)^2 - mu/2 e^{iτ∂²}(∂⁻¹u)^2
    fn quad_square(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let (mu, tau) = (self.spec.mu, self.spec.tau);
        let inv_dx = self.inv_dx.as_ref().expect("inverse derivative");
        let zero = u_hat[0];

        let antideriv = inv_dx.applied(u_hat);
        let mut flowed = self.flow.applied(&antideriv);
        self.grid.backward_in_place(&mut flowed);
        flowed.iter_mut().for_each(|z| *z = *z * *z);
        self.grid.forward_in_place(&mut flowed);

        let mut plain = antideriv;
        self.grid.backward_in_place(&mut plain);
        plain.iter_mut().for_each(|z| *z = *z * *z);
        self.grid.forward_in_place(&mut plain);
        self.flow.apply_in_place(&mut plain);

        let linear = 1.0 - 2.0 * I * mu * tau * zero;
        let mut out: Vec<Complex64> = u_hat
            .iter()
            .zip(self.flow.symbol())
            .zip(flowed.iter().zip(&plain))
            .map(|((c, m), (a, b))| linear * m * c + 0.5 * mu * (a - b))
            .collect();
        out[0] += I * mu * tau * zero * zero;
        out
    }

    // u^{n+1} = (1 - i mu tau conj(u0)) e^{iτ∂²}u - i mu tau ||u||^2
    //         + mu/2 ∂⁻¹[(e^{iτ∂²}u)(e^{-iτ∂²}∂⁻¹ conj u) - e^{iτ∂²}(u ∂⁻¹ conj u)]
    //         (+ i mu tau |u0|^2 with the zero-mode fix)
    fn quad_abs_square(&self, u_hat: &[Complex64]) -> Vec<Complex64> {
        let (mu, tau) = (self.spec.mu, self.spec.tau);
        let inv_dx = self.inv_dx.as_ref().expect("inverse derivative");
        let back = self.backward_flow.as_ref().expect("backward flow");
        let zero = u_hat[0];
        let mass: f64 = u_hat.iter().map(|c| c.norm_sqr()).sum();

        let u = self.physical(u_hat);
        let mut conj_hat: Vec<Complex64> = u.iter().map(|z| z.conj()).collect();
        self.grid.forward_in_place(&mut conj_hat);
        inv_dx.apply_in_place(&mut conj_hat);

        let mut flowed_u = self.flow.applied(u_hat);
        let flowed_hat = flowed_u.clone();
        self.grid.backward_in_place(&mut flowed_u);
        let mut flowed_conj = back.applied(&conj_hat);
        self.grid.backward_in_place(&mut flowed_conj);
        let mut first: Vec<Complex64> = flowed_u.iter().zip(&flowed_conj).map(|(a, b)| a * b).collect();
        self.grid.forward_in_place(&mut first);

        let mut conj_phys = conj_hat;
        self.grid.backward_in_place(&mut conj_phys);
        let mut second: Vec<Complex64> = u.iter().zip(&conj_phys).map(|(a, b)| a * b).collect();
        self.grid.forward_in_place(&mut second);
        self.flow.apply_in_place(&mut second);

        let mut bracket: Vec<Complex64> = first.iter().zip(&second).map(|(a, b)| a - b).collect();
        inv_dx.apply_in_place(&mut bracket);

        let linear = 1.0 - I * mu * tau * zero.conj();
        let mut out: Vec<Complex64> = flowed_hat
            .iter()
            .zip(&bracket)
            .map(|(c, b)| linear * c + 0.5 * mu * b)
            .collect();
        out[0] -= I * mu * tau * mass;
        if self.spec.quad_zero_mode_fix {
            out[0] += I * mu * tau * zero.norm_sqr();
        }
        out
    }
}

fn run_single(u: &Field, t: f64, spec: &SchemeSpec, expected: &[SchemeKind]) -> Result<Field> {
    if !expected.contains(&spec.kind) {
        return Err(Error::InvalidArgument(format!(
            "stepper called with scheme {}",
            spec.kind
        )));
    }
    Stepper::new(u.grid(), spec)?.step(u, t)
}

/// Low-regularity exponential-type step for `|u|^{2p} u`.
pub fn step_lowreg(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::LowRegExp])
}

/// Classical first-order exponential integrator step.
pub fn step_classical_exp(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::ClassicalExp])
}

pub fn step_lie(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::LieSplit])
}

pub fn step_strang(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::StrangSplit])
}

/// Low-regularity step for `i u_t = -u_xx + mu u^2`.
pub fn step_quad_u2(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::QuadU2])
}

/// Low-regularity step for `i u_t = -u_xx + mu |u|^2`.
pub fn step_quad_abs2(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::QuadAbsU2])
}

pub fn step_lie_quad(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::LieQuad])
}

pub fn step_strang_quad(u: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    run_single(u, t, spec, &[SchemeKind::StrangQuad])
}

/// Low-regularity step in the twisted variable.
pub fn step_lowreg_twisted(v: &Field, t: f64, spec: &SchemeSpec) -> Result<Field> {
    if spec.kind != SchemeKind::LowRegExp {
        return Err(Error::InvalidArgument(format!(
            "stepper called with scheme {}",
            spec.kind
        )));
    }
    Stepper::new(v.grid(), spec)?.step_twisted(v, t)
}
