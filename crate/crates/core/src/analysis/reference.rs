use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrators::{evolve, Nonlinearity, SchemeKind, SchemeSpec};
use crate::spectral::Field;

/// Default reference step: `T / 2^16`.
pub const DEFAULT_REFERENCE_REFINEMENT: u32 = 16;

/// How the reference solution of a convergence study is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferencePolicy {
    /// Each scheme is compared against itself run with the reference step.
    SelfRefined,
    /// Every scheme is compared against Strang splitting at the reference step.
    StrangRefined,
}

impl ReferencePolicy {
    /// The scheme that produces the reference for rows of `kind`.
    pub fn reference_kind(self, kind: SchemeKind, nonlinearity: Nonlinearity) -> Result<SchemeKind> {
        match self {
            ReferencePolicy::SelfRefined => Ok(kind),
            ReferencePolicy::StrangRefined => match nonlinearity {
                Nonlinearity::Power { .. } => Ok(SchemeKind::StrangSplit),
                Nonlinearity::Square => Ok(SchemeKind::StrangQuad),
                Nonlinearity::AbsSquare => Err(Error::InvalidArgument(
                    "no Strang splitting is available for the |u|^2 nonlinearity".into(),
                )),
            },
        }
    }
}

/// Number of reference steps used to reach time `t` with nominal step
/// `tau_ref`: `max(1, round(t / tau_ref))`, each of size `t / m`.
pub fn reference_steps(t: f64, tau_ref: f64) -> usize {
    ((t / tau_ref).round() as usize).max(1)
}

/// Fine-step solution at time `t`.
///
/// `equation` supplies the scheme, nonlinearity and `mu`; its `tau` is ignored.
pub fn reference_solution(
    u0: &Field,
    equation: &SchemeSpec,
    t: f64,
    policy: ReferencePolicy,
    tau_ref: f64,
) -> Result<Field> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("final time must be >= 0, got {t}")));
    }
    if !(tau_ref > 0.0) {
        return Err(Error::InvalidArgument(format!("reference step must be positive, got {tau_ref}")));
    }
    if t == 0.0 {
        return Ok(u0.to_fourier());
    }
    let kind = policy.reference_kind(equation.kind, equation.nonlinearity)?;
    let m = reference_steps(t, tau_ref);
    let spec = equation.with_kind(kind).with_tau(t / m as f64);
    Ok(evolve(u0, &spec, m)?.u)
}
