//! Convergence studies: configuration, bundled presets, the sweep runner and
//! output files.

mod config;
mod oracle_check;
mod output;
mod presets;
mod study;

pub use config::{
    EquationConfig, InitialConfig, OutputConfig, OutputFormat, ReferenceConfig, StudyConfig,
    TauLadder, LADDER_TOLERANCE, ROUNDING_CONVENTION,
};
pub use oracle_check::{oracle_check, random_coefficients, OracleDeviation, ORACLE_TOLERANCE};
pub use output::{
    csv_string, emit_outputs, format_g17, manifest_string, plot_data_string, CSV_FILE, CSV_HEADER,
    MANIFEST_FILE,
};
pub use presets::{preset, preset_names, Scale, DEFAULT_PRESET_SEED};
pub use study::{fully_failed_schemes, run_convergence_study, REFERENCE_FLOOR_FACTOR};
