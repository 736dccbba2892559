//! Norms, initial data, reference solutions, brute-force oracles and
//! convergence-order estimation.

pub mod data;
mod norms;
pub mod oracle;
mod order;
mod reference;
mod table;

pub use data::{
    exact_plane_wave, generate_rough_data, plane_wave, raw_uniform_samples, smooth_data,
    uniform_draw, RoughDataSpec, SmoothKind,
};
pub use norms::{h_r_distance, h_r_norm};
pub use oracle::{
    oracle_cubic_dominant, oracle_cubic_integral, oracle_cubic_step, oracle_free_flow,
    oracle_quad_integral,
};
pub use order::{estimate_order, fit_log_log};
pub use reference::{
    reference_solution, reference_steps, ReferencePolicy, DEFAULT_REFERENCE_REFINEMENT,
};
pub use table::{ErrorRow, ErrorTable, FittedSlope, SlopeWindow};
