//! Fourier pseudospectral solvers for the nonlinear Schrödinger equation
//! i ∂_t ψ = −Δψ + λ f(|ψ|²) ψ with the singular power kernel f(ρ) = ρ^α,
//! −1/3 < α < 0, on periodic boxes in one and two dimensions.
//!
//! The singular kernel is tamed by one of three regularizations (a local
//! polynomial energy regularization, a global density shift, or a global
//! rational kernel), integrated in time by Lie-Trotter splitting or a Lawson
//! exponential integrator, both first order. On top of the solver sit
//! conserved-quantity diagnostics, vortex detection, convergence-study
//! drivers with slope fits, and a small CLI.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod io;
pub mod observables;
pub mod regularization;

pub use error::{Error, Result};
