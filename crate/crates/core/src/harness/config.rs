use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    generate_rough_data, plane_wave, smooth_data, ReferencePolicy, RoughDataSpec, SlopeWindow,
    SmoothKind, DEFAULT_REFERENCE_REFINEMENT,
};
use crate::error::{Error, Result};
use crate::integrators::{Nonlinearity, SchemeKind, SchemeSpec};
use crate::spectral::{make_grid, Field, TorusGrid};

/// Largest `|n tau - T|` accepted for dyadic and explicit ladders.
pub const LADDER_TOLERANCE: f64 = 1e-12;

/// How non-divisible final times are handled. Recorded in every manifest.
pub const ROUNDING_CONVENTION: &str =
    "n = round(T / tau); each row integrates n steps and is compared with the reference at t = n * tau";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EquationConfig {
    PowerNls {
        p: f64,
        mu: f64,
        #[serde(default)]
        allow_fractional_p: bool,
    },
    QuadU2 {
        mu: f64,
    },
    QuadAbs2 {
        mu: f64,
        #[serde(default = "default_true")]
        quad_zero_mode_fix: bool,
    },
}

fn default_true() -> bool {
    true
}

impl EquationConfig {
    pub fn mu(&self) -> f64 {
        match *self {
            EquationConfig::PowerNls { mu, .. }
            | EquationConfig::QuadU2 { mu }
            | EquationConfig::QuadAbs2 { mu, .. } => mu,
        }
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        match *self {
            EquationConfig::PowerNls { p, .. } => Nonlinearity::Power { p },
            EquationConfig::QuadU2 { .. } => Nonlinearity::Square,
            EquationConfig::QuadAbs2 { .. } => Nonlinearity::AbsSquare,
        }
    }

    /// Scheme specification for `kind` with step `tau`.
    pub fn scheme(&self, kind: SchemeKind, tau: f64) -> SchemeSpec {
        match *self {
            EquationConfig::PowerNls {
                p,
                mu,
                allow_fractional_p,
            } => SchemeSpec {
                allow_fractional_p,
                ..SchemeSpec::power(kind, mu, p, tau)
            },
            EquationConfig::QuadU2 { mu } => SchemeSpec::square(kind, mu, tau),
            EquationConfig::QuadAbs2 {
                mu,
                quad_zero_mode_fix,
            } => SchemeSpec {
                quad_zero_mode_fix,
                ..SchemeSpec::abs_square(kind, mu, tau)
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialConfig {
    /// `|∂|^{-theta}` applied to `rand + i rand`, L2-normalized.
    Rough {
        theta: f64,
        seed: u64,
        /// Keep the mean of the raw samples instead of zeroing it.
        #[serde(default)]
        keep_mean: bool,
    },
    SinCos,
    Sin,
    PlaneWave {
        k: Vec<i64>,
        amplitude: f64,
        #[serde(default)]
        phase: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TauLadder {
    /// `tau = j / 512`, `j = 1..=512`.
    Paper,
    /// `tau = 2^{-e}` for `e = min_exp..=max_exp`.
    Dyadic { min_exp: i32, max_exp: i32 },
    Explicit { values: Vec<f64> },
}

impl TauLadder {
    pub fn taus(&self) -> Vec<f64> {
        match self {
            TauLadder::Paper => (1..=512).map(|j| j as f64 / 512.0).collect(),
            TauLadder::Dyadic { min_exp, max_exp } => {
                (*min_exp..=*max_exp).map(|e| 2f64.powi(-e)).collect()
            }
            TauLadder::Explicit { values } => values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceConfig {
    pub policy: ReferencePolicy,
    /// Defaults to `T / 2^16`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_ref: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
    /// Per-scheme `log10 tau, log10 error` files.
    #[serde(default = "default_true")]
    pub plot_data: bool,
}

fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("out"),
            formats: default_formats(),
            plot_data: true,
        }
    }
}

/// One convergence experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    #[serde(default)]
    pub name: String,
    pub equation: EquationConfig,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(rename = "K")]
    pub k_max: usize,
    pub initial: InitialConfig,
    pub schemes: Vec<SchemeKind>,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub tau_ladder: TauLadder,
    pub error_norm_r: f64,
    pub reference: ReferenceConfig,
    #[serde(default)]
    pub slope_window: SlopeWindow,
    #[serde(default)]
    pub output: OutputConfig,
    /// Worker threads; `None` uses every available core.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_dimension() -> usize {
    1
}

impl StudyConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: StudyConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("study configs always serialize")
    }

    pub fn seed(&self) -> Option<u64> {
        match self.initial {
            InitialConfig::Rough { seed, .. } => Some(seed),
            _ => None,
        }
    }

    /// Replaces the seed of rough initial data; other data are unaffected.
    pub fn set_seed(&mut self, new_seed: u64) {
        if let InitialConfig::Rough { seed, .. } = &mut self.initial {
            *seed = new_seed;
        }
    }

    pub fn tau_ref(&self) -> f64 {
        self.reference
            .tau_ref
            .unwrap_or(self.t_final / 2f64.powi(DEFAULT_REFERENCE_REFINEMENT as i32))
    }

    /// `(tau, n_steps)` for every rung in ladder order.
    pub fn rungs(&self) -> Vec<(f64, usize)> {
        self.tau_ladder
            .taus()
            .into_iter()
            .map(|tau| (tau, ((self.t_final / tau).round() as usize).max(1)))
            .collect()
    }

    pub fn grid(&self) -> Result<Arc<TorusGrid>> {
        make_grid(self.dimension, self.k_max).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn initial_field(&self, grid: &Arc<TorusGrid>) -> Result<Field> {
        match &self.initial {
            InitialConfig::Rough {
                theta,
                seed,
                keep_mean,
            } => {
                let spec = RoughDataSpec {
                    keep_mean: *keep_mean,
                    ..RoughDataSpec::new(*theta, *seed, self.k_max)
                };
                generate_rough_data(&spec, grid)
            }
            InitialConfig::SinCos => smooth_data(SmoothKind::SinCos, grid),
            InitialConfig::Sin => smooth_data(SmoothKind::Sin, grid),
            InitialConfig::PlaneWave {
                k,
                amplitude,
                phase,
            } => Ok(plane_wave(grid, k, Complex64::from_polar(*amplitude, *phase))),
        }
    }

    /// Checks everything that can be checked without integrating.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        let grid = self.grid()?;
        let mu = self.equation.mu();
        if !mu.is_finite() {
            return fail(format!("mu must be finite, got {mu}"));
        }
        if let EquationConfig::PowerNls { p, .. } = self.equation {
            if !(p > 0.0 && p.is_finite()) {
                return fail(format!("p must be positive, got {p}"));
            }
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return fail(format!("T must be positive, got {}", self.t_final));
        }
        if !(self.error_norm_r >= 0.0 && self.error_norm_r.is_finite()) {
            return fail(format!("error_norm_r must be >= 0, got {}", self.error_norm_r));
        }

        if self.schemes.is_empty() {
            return fail("no schemes listed".into());
        }
        let mut seen = HashSet::new();
        for &kind in &self.schemes {
            if !seen.insert(kind) {
                return fail(format!("scheme {kind} listed twice"));
            }
            self.equation
                .scheme(kind, 1.0)
                .validate(self.dimension)
                .map_err(|e| Error::Config(format!("{kind}: {e}")))?;
        }

        let rungs = self.rungs();
        if rungs.is_empty() {
            return fail("tau ladder is empty".into());
        }
        for &(tau, n) in &rungs {
            if !(tau > 0.0 && tau.is_finite()) {
                return fail(format!("tau must be positive, got {tau}"));
            }
            if self.tau_ladder != TauLadder::Paper && (n as f64 * tau - self.t_final).abs() >= LADDER_TOLERANCE {
                return fail(format!(
                    "T / tau is not an integer for tau = {tau} (T = {})",
                    self.t_final
                ));
            }
        }

        let tau_ref = self.tau_ref();
        if !(tau_ref > 0.0 && tau_ref.is_finite()) {
            return fail(format!("reference step must be positive, got {tau_ref}"));
        }
        for &kind in &self.schemes {
            let reference = self
                .reference
                .policy
                .reference_kind(kind, self.equation.nonlinearity())
                .map_err(|e| Error::Config(e.to_string()))?;
            self.equation
                .scheme(reference, tau_ref)
                .validate(self.dimension)
                .map_err(|e| Error::Config(format!("reference {reference}: {e}")))?;
        }

        match &self.initial {
            InitialConfig::Rough { theta, .. } => {
                if !(*theta >= 0.0 && theta.is_finite()) {
                    return fail(format!("theta must be >= 0, got {theta}"));
                }
                if self.dimension != 1 {
                    return fail("rough initial data are one-dimensional".into());
                }
            }
            InitialConfig::SinCos | InitialConfig::Sin => {
                if self.dimension != 1 {
                    return fail("sin and sin_cos initial data are one-dimensional".into());
                }
            }
            InitialConfig::PlaneWave { k, amplitude, phase } => {
                if k.len() != self.dimension {
                    return fail(format!(
                        "plane wave has {} wavenumbers for dimension {}",
                        k.len(),
                        self.dimension
                    ));
                }
                let limit = self.k_max as i64;
                if k.iter().any(|&c| c < -limit || c >= limit) {
                    return fail(format!("plane wave mode {k:?} is not resolved with K = {}", self.k_max));
                }
                if !(amplitude.is_finite() && phase.is_finite()) {
                    return fail("plane wave amplitude and phase must be finite".into());
                }
            }
        }
        // cheap for every supported initial value; surfaces any remaining issue
        self.initial_field(&grid).map_err(|e| Error::Config(e.to_string()))?;

        if self.workers == Some(0) {
            return fail("workers must be at least 1".into());
        }
        if self.output.formats.is_empty() && !self.output.plot_data {
            return fail("no output requested".into());
        }
        Ok(())
    }
}
