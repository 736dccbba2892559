use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::pointwise::as_integer;
use crate::error::{Error, Result};

/// The time-stepping schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeKind {
    /// Low-regularity exponential-type integrator for `|u|^{2p} u`.
    LowRegExp,
    /// Classical first-order exponential integrator (any nonlinearity).
    ClassicalExp,
    /// Lie splitting with the exact phase rotation for `|u|^{2p} u`.
    LieSplit,
    /// Strang splitting with the exact phase rotation for `|u|^{2p} u`.
    StrangSplit,
    /// Low-regularity integrator for the `u^2` nonlinearity (d = 1).
    QuadU2,
    /// Low-regularity integrator for the `|u|^2` nonlinearity (d = 1).
    QuadAbsU2,
    /// Lie splitting with the exact `u/(1 + i mu tau u)` substep (d = 1).
    LieQuad,
    /// Strang splitting with the exact `u/(1 + i mu tau u)` substep (d = 1).
    StrangQuad,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 8] = [
        SchemeKind::LowRegExp,
        SchemeKind::ClassicalExp,
        SchemeKind::LieSplit,
        SchemeKind::StrangSplit,
        SchemeKind::QuadU2,
        SchemeKind::QuadAbsU2,
        SchemeKind::LieQuad,
        SchemeKind::StrangQuad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::LowRegExp => "LowRegExp",
            SchemeKind::ClassicalExp => "ClassicalExp",
            SchemeKind::LieSplit => "LieSplit",
            SchemeKind::StrangSplit => "StrangSplit",
            SchemeKind::QuadU2 => "QuadU2",
            SchemeKind::QuadAbsU2 => "QuadAbsU2",
            SchemeKind::LieQuad => "LieQuad",
            SchemeKind::StrangQuad => "StrangQuad",
        }
    }

    /// Quadratic-equation schemes are only defined on one-dimensional grids.
    pub fn requires_one_dimension(self) -> bool {
        matches!(
            self,
            SchemeKind::QuadU2 | SchemeKind::QuadAbsU2 | SchemeKind::LieQuad | SchemeKind::StrangQuad
        )
    }

    pub fn supports(self, nonlinearity: Nonlinearity) -> bool {
        use Nonlinearity::*;
        match self {
            SchemeKind::ClassicalExp => true,
            SchemeKind::LowRegExp | SchemeKind::LieSplit | SchemeKind::StrangSplit => {
                matches!(nonlinearity, Power { .. })
            }
            SchemeKind::QuadU2 | SchemeKind::LieQuad | SchemeKind::StrangQuad => {
                nonlinearity == Square
            }
            SchemeKind::QuadAbsU2 => nonlinearity == AbsSquare,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

/// Right-hand side nonlinearity `N(u)` in `i u_t = -Δu + mu N(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Nonlinearity {
    /// `|u|^{2p} u`
    Power { p: f64 },
    /// `u^2`
    Square,
    /// `|u|^2`
    AbsSquare,
}

/// One integrator together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    pub nonlinearity: Nonlinearity,
    pub mu: f64,
    pub tau: f64,
    /// Adds `+ i mu tau |u_hat_0|^2` in [`SchemeKind::QuadAbsU2`] so the
    /// doubly counted (0, 0) resonance is removed.
    pub quad_zero_mode_fix: bool,
    /// Permits non-integer `p` in the low-regularity scheme.
    pub allow_fractional_p: bool,
}

impl SchemeSpec {
    pub fn power(kind: SchemeKind, mu: f64, p: f64, tau: f64) -> Self {
        SchemeSpec {
            kind,
            nonlinearity: Nonlinearity::Power { p },
            mu,
            tau,
            quad_zero_mode_fix: true,
            allow_fractional_p: false,
        }
    }

    pub fn square(kind: SchemeKind, mu: f64, tau: f64) -> Self {
        SchemeSpec {
            nonlinearity: Nonlinearity::Square,
            ..Self::power(kind, mu, 1.0, tau)
        }
    }

    pub fn abs_square(kind: SchemeKind, mu: f64, tau: f64) -> Self {
        SchemeSpec {
            nonlinearity: Nonlinearity::AbsSquare,
            ..Self::power(kind, mu, 1.0, tau)
        }
    }

    pub fn with_tau(self, tau: f64) -> Self {
        SchemeSpec { tau, ..self }
    }

    pub fn with_kind(self, kind: SchemeKind) -> Self {
        SchemeSpec { kind, ..self }
    }

    pub fn with_mu(self, mu: f64) -> Self {
        SchemeSpec { mu, ..self }
    }

    /// Exponent `p` of a power nonlinearity.
    pub fn p(&self) -> Option<f64> {
        match self.nonlinearity {
            Nonlinearity::Power { p } => Some(p),
            _ => None,
        }
    }

    /// Checks everything except the sign of `tau`; steppers accept negative
    /// steps so that backward compositions can be formed.
    pub(crate) fn check_stepper(&self, dim: usize) -> Result<()> {
        if !self.tau.is_finite() || !self.mu.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tau and mu must be finite (tau={}, mu={})",
                self.tau, self.mu
            )));
        }
        if !self.kind.supports(self.nonlinearity) {
            return Err(Error::InvalidArgument(format!(
                "{} does not apply to nonlinearity {:?}",
                self.kind, self.nonlinearity
            )));
        }
        if self.kind.requires_one_dimension() && dim != 1 {
            return Err(Error::DimensionUnsupported {
                scheme: self.kind.name(),
                dim,
            });
        }
        if let Nonlinearity::Power { p } = self.nonlinearity {
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::InvalidArgument(format!("p must be positive, got {p}")));
            }
            let integer = as_integer(p).is_some_and(|n| n >= 1);
            if self.kind == SchemeKind::LowRegExp && !integer && !self.allow_fractional_p {
                return Err(Error::InvalidArgument(format!(
                    "LowRegExp with non-integer p = {p} is experimental; set allow_fractional_p"
                )));
            }
        }
        Ok(())
    }

    /// Full validation: stepper checks plus `tau > 0`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::InvalidArgument(format!("tau must be positive, got {}", self.tau)));
        }
        self.check_stepper(dim)
    }
}
