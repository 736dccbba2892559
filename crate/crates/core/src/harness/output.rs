use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{OutputFormat, StudyConfig, ROUNDING_CONVENTION};
use crate::analysis::{ErrorRow, ErrorTable, FittedSlope};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "scheme,tau,n_steps,error,norm_r,failed";
pub const CSV_FILE: &str = "errors.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Formats `x` like C's `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    const PRECISION: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    // the exponent after rounding to 17 significant digits decides the style
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= PRECISION {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_string(table: &ErrorTable) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.scheme,
            format_g17(r.tau),
            r.n_steps,
            format_g17(r.error),
            format_g17(r.norm_r),
            r.failed
        )
        .expect("writing to a String");
    }
    out
}

/// `log10 tau, log10 error` for the usable rows of one scheme.
pub fn plot_data_string(rows: &[&ErrorRow]) -> String {
    let mut out = String::from("# log10_tau log10_error\n");
    for r in rows.iter().filter(|r| !r.failed && r.error > 0.0) {
        writeln!(out, "{} {}", format_g17(r.tau.log10()), format_g17(r.error.log10()))
            .expect("writing to a String");
    }
    out
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    name: &'a str,
    software: &'static str,
    version: &'static str,
    seed: Option<u64>,
    rounding_convention: &'static str,
    reference_tau: f64,
    config: &'a StudyConfig,
    row_count: usize,
    fitted_slopes: &'a [FittedSlope],
    rows: &'a [ErrorRow],
    total_wall_seconds: f64,
}

pub fn manifest_string(table: &ErrorTable, config: &StudyConfig) -> String {
    let manifest = Manifest {
        name: &config.name,
        software: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        seed: config.seed(),
        rounding_convention: ROUNDING_CONVENTION,
        reference_tau: config.tau_ref(),
        config,
        row_count: table.rows.len(),
        fitted_slopes: &table.fitted_slopes,
        rows: &table.rows,
        total_wall_seconds: table.rows.iter().map(|r| r.wall_seconds).sum(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    text
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Output {
        path: path.to_path_buf(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

/// Writes the requested files into `config.output.dir` and returns their paths.
pub fn emit_outputs(table: &ErrorTable, config: &StudyConfig) -> Result<Vec<PathBuf>> {
    let dir = &config.output.dir;
    fs::create_dir_all(dir).map_err(|source| Error::Output {
        path: dir.clone(),
        source,
    })?;
    let mut written = Vec::new();
    let mut emit = |name: String, contents: String| -> Result<()> {
        let path = dir.join(name);
        write_atomic(&path, &contents)?;
        written.push(path);
        Ok(())
    };
    if config.output.formats.contains(&OutputFormat::Csv) {
        emit(CSV_FILE.into(), csv_string(table))?;
    }
    if config.output.formats.contains(&OutputFormat::Json) {
        emit(MANIFEST_FILE.into(), manifest_string(table, config))?;
    }
    if config.output.plot_data {
        for &kind in &config.schemes {
            let rows: Vec<&ErrorRow> = table.rows_for(kind).collect();
            emit(format!("plot_{kind}.dat"), plot_data_string(&rows))?;
        }
    }
    Ok(written)
}
