use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::config::StudyConfig;
use crate::analysis::{h_r_distance, ErrorRow, ErrorTable};
use crate::error::{Error, Result};
use crate::integrators::{evolve, evolve_with, SchemeKind, SchemeSpec, Stepper};
use crate::spectral::Field;

/// Rows whose error is below `REFERENCE_FLOOR_FACTOR * delta` are flagged,
/// where `delta` is the distance between the references at `tau_ref` and
/// `2 tau_ref`.
pub const REFERENCE_FLOOR_FACTOR: f64 = 10.0;

/// Reference solutions of one reference scheme at every comparison time.
#[derive(Debug)]
struct References {
    /// `(fine, floor)` per comparison time, or the failure message.
    snapshots: std::result::Result<Vec<(Field, f64)>, String>,
}

/// Solutions of `spec` (its `tau` is the nominal step) at each of `times`
/// (ascending), all taken from a single trajectory. A time off the `tau`
/// lattice is reached by one final shorter step from the last lattice point.
fn snapshots(u0: &Field, spec: &SchemeSpec, times: &[f64]) -> Result<Vec<Field>> {
    let tau = spec.tau;
    let stepper = Stepper::new(u0.grid(), spec)?;
    let mut out = Vec::with_capacity(times.len());
    let mut current = u0.to_fourier();
    let mut done = 0usize;
    for &t in times {
        let q = t / tau;
        let on_lattice = (q.round() * tau - t).abs() <= 1e-12 * t.max(1.0);
        let m = if on_lattice { q.round() } else { q.floor() } as usize;
        let state = evolve_with(&stepper, &current, m - done).map_err(|e| offset(e, done))?;
        current = state.u;
        done = m;
        if on_lattice {
            out.push(current.clone());
        } else {
            let last = Stepper::new(u0.grid(), &spec.with_tau(t - m as f64 * tau))?;
            out.push(last.step(&current, m as f64 * tau).map_err(|e| e.at_step(m + 1))?);
        }
    }
    Ok(out)
}

fn offset(e: Error, done: usize) -> Error {
    match e {
        Error::BlowUp { step, .. } | Error::SingularSubstep { step, .. } => e.at_step(step + done),
        other => other,
    }
}

fn references(config: &StudyConfig, u0: &Field, kind: SchemeKind, times: &[f64]) -> References {
    let tau_ref = config.tau_ref();
    let spec = config.equation.scheme(kind, tau_ref);
    let run = || -> Result<Vec<(Field, f64)>> {
        let fine = snapshots(u0, &spec, times)?;
        let coarse = snapshots(u0, &spec.with_tau(2.0 * tau_ref), times)?;
        fine.into_iter()
            .zip(coarse)
            .map(|(f, c)| {
                let floor = h_r_distance(&f, &c, config.error_norm_r)?;
                Ok((f, floor))
            })
            .collect()
    };
    References {
        snapshots: run().map_err(|e| format!("reference {kind} failed: {e}")),
    }
}

fn time_key(t: f64) -> u64 {
    t.to_bits()
}

/// Runs every `(scheme, tau)` job of `config` and fits the slopes.
///
/// A failing row is recorded and does not stop the others. Rows come out
/// grouped by scheme in config order, then in ladder order.
pub fn run_convergence_study(config: &StudyConfig) -> Result<ErrorTable> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_in_pool(config))
}

fn run_in_pool(config: &StudyConfig) -> Result<ErrorTable> {
    let grid = config.grid()?;
    let u0 = config.initial_field(&grid)?;
    let rungs = config.rungs();

    let mut times: Vec<f64> = rungs.iter().map(|&(tau, n)| n as f64 * tau).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let time_index: BTreeMap<u64, usize> =
        times.iter().enumerate().map(|(i, &t)| (time_key(t), i)).collect();

    let nonlinearity = config.equation.nonlinearity();
    let mut reference_kinds: Vec<SchemeKind> = Vec::new();
    for &kind in &config.schemes {
        let r = config.reference.policy.reference_kind(kind, nonlinearity)?;
        if !reference_kinds.contains(&r) {
            reference_kinds.push(r);
        }
    }
    let refs: Vec<References> = reference_kinds
        .par_iter()
        .map(|&kind| references(config, &u0, kind, &times))
        .collect();
    let refs_for = |kind: SchemeKind| -> &References {
        let r = config
            .reference
            .policy
            .reference_kind(kind, nonlinearity)
            .expect("checked above");
        &refs[reference_kinds.iter().position(|&k| k == r).expect("computed above")]
    };

    let jobs: Vec<(SchemeKind, f64, usize)> = config
        .schemes
        .iter()
        .flat_map(|&kind| rungs.iter().map(move |&(tau, n)| (kind, tau, n)))
        .collect();
    let rows: Vec<ErrorRow> = jobs
        .par_iter()
        .map(|&(kind, tau, n)| {
            let t = n as f64 * tau;
            let start = Instant::now();
            let outcome = match &refs_for(kind).snapshots {
                Err(msg) => Err(msg.clone()),
                Ok(snaps) => {
                    let (reference, floor) = &snaps[time_index[&time_key(t)]];
                    evolve(&u0, &config.equation.scheme(kind, tau), n)
                        .and_then(|state| h_r_distance(&state.u, reference, config.error_norm_r))
                        .map(|error| (error, *floor))
                        .map_err(|e| e.to_string())
                }
            };
            let wall_seconds = start.elapsed().as_secs_f64();
            let (error, failure, below_reference_floor) = match outcome {
                Ok((error, floor)) => (error, None, error < REFERENCE_FLOOR_FACTOR * floor),
                Err(msg) => (f64::NAN, Some(msg), false),
            };
            ErrorRow {
                scheme: kind,
                tau,
                n_steps: n,
                t_final: t,
                error,
                norm_r: config.error_norm_r,
                failed: failure.is_some(),
                failure,
                below_reference_floor,
                wall_seconds,
            }
        })
        .collect();

    let mut table = ErrorTable {
        rows,
        fitted_slopes: Vec::new(),
    };
    table.fit_slopes(&config.schemes, config.slope_window);
    Ok(table)
}

/// Schemes for which every row failed.
pub fn fully_failed_schemes(table: &ErrorTable) -> Vec<SchemeKind> {
    let mut kinds: Vec<SchemeKind> = Vec::new();
    for row in &table.rows {
        if !kinds.contains(&row.scheme) {
            kinds.push(row.scheme);
        }
    }
    kinds
        .into_iter()
        .filter(|&k| table.rows_for(k).all(|r| r.failed))
        .collect()
}
