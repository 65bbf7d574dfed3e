//! Solver toolkit for PDE-constrained optimal control of continuous driers.
//!
//! The crate covers two hyperbolic transport models: a one-equation heating
//! model with closed-form solutions, and a three-equation solid/liquid/
//! temperature drier model. On top of both sits the machinery that steers
//! the outlet temperature to a set point: adjoint solvers, Barzilai-Borwein
//! steepest descent, linear stability diagnostics and power-spectrum
//! analysis.

// Validation uses `!(x > 0.0)` so that NaN fails the check as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod drier;
pub mod error;
pub mod field;
pub mod grid;
pub mod linstab;
pub mod quadrature;
pub mod signal;
pub mod simple;
pub mod spectral;
pub mod stencil;

pub use drier::{DrierParams, DrierState};
pub use linstab::PerturbationState;
pub use error::{ModelError, Result};
pub use field::{ScalarField, TimeSeries};
pub use grid::{CflCheck, SpaceTimeGrid};
pub use signal::Signal;
