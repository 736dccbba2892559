use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{
    EquationConfig, InitialConfig, OutputConfig, ReferenceConfig, StudyConfig, TauLadder,
};
use crate::analysis::{ReferencePolicy, SlopeWindow};
use crate::error::{Error, Result};
use crate::integrators::SchemeKind;

/// Seed used by presets with random data unless overridden.
pub const DEFAULT_PRESET_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// `K = 2^8`, dyadic ladder `2^-4 ... 2^-10`.
    #[default]
    Desk,
    /// `K = 2^10`, `tau = j/512`.
    Paper,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Desk => "desk",
            Scale::Paper => "paper",
        })
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            other => Err(Error::Config(format!("unknown scale `{other}` (expected desk or paper)"))),
        }
    }
}

/// Rungs `j > 32` of the `j/512` ladder, i.e. `tau > 1/16`.
const PAPER_DROP_LARGEST: usize = 480;

const THETAS: [&str; 4] = ["1.5", "2", "3", "5"];
const FRACTIONAL_P: [&str; 4] = ["1", "0.75", "0.5", "0.25"];

pub fn preset_names() -> Vec<String> {
    let mut names = Vec::new();
    for family in ["cubic-rough", "quintic-rough"] {
        names.extend(THETAS.iter().map(|t| format!("{family}-{t}")));
    }
    names.extend(
        ["quad-smooth", "quad-rough", "quad-small-mu", "quad-small-mu-rough"].map(String::from),
    );
    names.extend(FRACTIONAL_P.iter().map(|p| format!("noninteger-p-{p}")));
    names
}

const POWER_SCHEMES: [SchemeKind; 4] = [
    SchemeKind::LieSplit,
    SchemeKind::StrangSplit,
    SchemeKind::ClassicalExp,
    SchemeKind::LowRegExp,
];

const QUAD_SCHEMES: [SchemeKind; 4] = [
    SchemeKind::LieQuad,
    SchemeKind::StrangQuad,
    SchemeKind::ClassicalExp,
    SchemeKind::QuadU2,
];

/// The named experiment at the requested scale.
pub fn preset(name: &str, scale: Scale) -> Result<StudyConfig> {
    let unknown = || Error::UnknownPreset(name.to_string());
    let suffix = |prefix: &str, allowed: &[&str]| -> Option<f64> {
        let rest = name.strip_prefix(prefix)?;
        allowed.contains(&rest).then(|| rest.parse().ok()).flatten()
    };

    let rough = |theta: f64, keep_mean: bool| InitialConfig::Rough {
        theta,
        seed: DEFAULT_PRESET_SEED,
        keep_mean,
    };
    let (equation, initial, schemes, t_final, r, policy) = if let Some(theta) =
        suffix("cubic-rough-", &THETAS).or_else(|| suffix("quintic-rough-", &THETAS))
    {
        let p = if name.starts_with("cubic") { 1.0 } else { 2.0 };
        let policy = if theta == 5.0 {
            ReferencePolicy::StrangRefined
        } else {
            ReferencePolicy::SelfRefined
        };
        (
            EquationConfig::PowerNls {
                p,
                mu: 1.0,
                allow_fractional_p: false,
            },
            rough(theta, false),
            POWER_SCHEMES.to_vec(),
            1.0,
            1.0,
            policy,
        )
    } else if let Some(p) = suffix("noninteger-p-", &FRACTIONAL_P) {
        (
            EquationConfig::PowerNls {
                p,
                mu: 1.0,
                allow_fractional_p: true,
            },
            InitialConfig::Sin,
            POWER_SCHEMES.to_vec(),
            1.0,
            1.0,
            ReferencePolicy::SelfRefined,
        )
    } else {
        let quad = |mu| EquationConfig::QuadU2 { mu };
        let schemes = QUAD_SCHEMES.to_vec();
        match name {
            "quad-smooth" => (quad(1.0), InitialConfig::SinCos, schemes, 1.0, 0.0, ReferencePolicy::StrangRefined),
            "quad-rough" => (quad(1.0), rough(0.0, true), schemes, 1.0, 0.0, ReferencePolicy::SelfRefined),
            "quad-small-mu" => (quad(0.01), InitialConfig::SinCos, schemes, 10.0, 0.0, ReferencePolicy::StrangRefined),
            "quad-small-mu-rough" => (quad(0.01), rough(0.0, true), schemes, 10.0, 0.0, ReferencePolicy::SelfRefined),
            _ => return Err(unknown()),
        }
    };

    let (k_max, tau_ladder, slope_window) = match scale {
        Scale::Desk => (
            1 << 8,
            TauLadder::Dyadic {
                min_exp: 4,
                max_exp: 10,
            },
            SlopeWindow::default(),
        ),
        // fit over tau <= 1/16 like the desk ladder; the dense large-tau end
        // of j/512 would otherwise dominate the least-squares fit
        Scale::Paper => (
            1 << 10,
            TauLadder::Paper,
            SlopeWindow {
                drop_largest: PAPER_DROP_LARGEST,
                drop_smallest: 2,
            },
        ),
    };
    let config = StudyConfig {
        name: name.to_string(),
        equation,
        dimension: 1,
        k_max,
        initial,
        schemes,
        t_final,
        tau_ladder,
        error_norm_r: r,
        reference: ReferenceConfig {
            policy,
            tau_ref: None,
        },
        slope_window,
        output: OutputConfig {
            dir: PathBuf::from("out").join(name),
            ..OutputConfig::default()
        },
        workers: None,
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_builds() {
        let names = preset_names();
        assert_eq!(names.len(), 16);
        for name in &names {
            for scale in [Scale::Desk, Scale::Paper] {
                let c = preset(name, scale).unwrap();
                assert_eq!(&c.name, name);
            }
        }
        assert!(matches!(preset("cubic-rough-4", Scale::Desk), Err(Error::UnknownPreset(_))));
        assert!(matches!(preset("nope", Scale::Paper), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn cubic_rough_2_at_full_scale() {
        let c = preset("cubic-rough-2", Scale::Paper).unwrap();
        assert_eq!(
            c.equation,
            EquationConfig::PowerNls {
                p: 1.0,
                mu: 1.0,
                allow_fractional_p: false
            }
        );
        assert!(matches!(c.initial, InitialConfig::Rough { theta, keep_mean: false, .. } if theta == 2.0));
        assert_eq!(c.k_max, 1024);
        assert_eq!(c.t_final, 1.0);
        assert_eq!(c.error_norm_r, 1.0);
        assert_eq!(c.tau_ladder, TauLadder::Paper);
        assert_eq!(c.rungs().len(), 512);
        assert_eq!(c.slope_window.drop_largest, 480);
        assert_eq!(c.reference.policy, ReferencePolicy::SelfRefined);
        let five = preset("cubic-rough-5", Scale::Paper).unwrap();
        assert_eq!(five.reference.policy, ReferencePolicy::StrangRefined);
    }

    #[test]
    fn quadratic_presets() {
        let c = preset("quad-smooth", Scale::Paper).unwrap();
        assert_eq!(c.equation, EquationConfig::QuadU2 { mu: 1.0 });
        assert_eq!(c.initial, InitialConfig::SinCos);
        assert_eq!((c.t_final, c.error_norm_r), (1.0, 0.0));
        assert_eq!(c.reference.policy, ReferencePolicy::StrangRefined);

        let c = preset("quad-small-mu", Scale::Paper).unwrap();
        assert_eq!(c.equation, EquationConfig::QuadU2 { mu: 0.01 });
        assert_eq!(c.t_final, 10.0);

        let c = preset("quad-rough", Scale::Desk).unwrap();
        assert!(matches!(c.initial, InitialConfig::Rough { theta, keep_mean: true, .. } if theta == 0.0));
        assert_eq!(c.k_max, 256);
        assert_eq!(c.rungs().len(), 7);
    }

    #[test]
    fn noninteger_p() {
        let c = preset("noninteger-p-0.25", Scale::Paper).unwrap();
        assert_eq!(
            c.equation,
            EquationConfig::PowerNls {
                p: 0.25,
                mu: 1.0,
                allow_fractional_p: true
            }
        );
        assert_eq!(c.initial, InitialConfig::Sin);
    }

    #[test]
    fn scale_parsing() {
        assert_eq!("desk".parse::<Scale>().unwrap(), Scale::Desk);
        assert_eq!("paper".parse::<Scale>().unwrap(), Scale::Paper);
        assert!("huge".parse::<Scale>().is_err());
    }
}
