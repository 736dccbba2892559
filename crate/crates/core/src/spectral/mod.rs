//! Torus discretization, Fourier transforms and diagonal Fourier operators.

mod field;
mod grid;
mod multiplier;

pub use field::{Field, View};
pub use grid::{make_grid, TorusGrid, DEFAULT_MAX_LOG2_POINTS};
pub use multiplier::{
    apply, free_flow, inverse_derivative, phi1, phi1_of_scaled_laplacian, Multiplier,
    PHI1_SERIES_RADIUS,
};
