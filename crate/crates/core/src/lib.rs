//! Fourier pseudospectral solvers for semilinear Schrödinger equations
//! `i u_t = -Δu + mu N(u)` on the d-dimensional torus.
//!
//! The crate provides the low-regularity exponential-type integrators for
//! `|u|^{2p} u`, `u^2` and `|u|^2` nonlinearities together with classical
//! Lie/Strang splitting and exponential-integrator baselines, plus the
//! tooling needed to run convergence-order studies on rough initial data.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod integrators;
pub mod spectral;

pub use error::{Error, Result};
