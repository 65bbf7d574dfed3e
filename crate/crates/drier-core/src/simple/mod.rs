//! One-equation heating model
//!
//!   dT/dt + u0 dT/dx = k (q(t) - T),   x in (0, length],
//!
//! with inlet data T(0, t) and initial data T(x, 0). The model admits a
//! closed-form solution and a closed-form optimal control, which makes it the
//! validation bed for the numerical machinery used by the full drier model.

mod analytic;
mod forward;

pub use analytic::{
    analytic_optimal_control, analytic_outlet_series, analytic_solution, analytic_solution_with,
    exponential_relaxation_integral, optimal_control_jump_limits, washout_control,
    RelaxationIntegral,
};
pub use forward::{solve_forward, solve_forward_outlet, SimpleTrajectory};

use crate::error::{ModelError, Result};
use crate::signal::Signal;

/// Parameters of the one-equation model.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleModelParams {
    /// Transport velocity [m/min], > 0.
    pub u0: f64,
    /// Relaxation rate toward the surroundings temperature [1/min], > 0.
    pub k: f64,
    /// Drier length [m], > 0.
    pub length: f64,
    /// Set-point outlet temperature [deg C].
    pub t_star: f64,
    /// Initial temperature profile T(x, 0).
    pub t_init: Signal,
    /// Inlet temperature signal T(0, t).
    pub t_inlet: Signal,
}

impl SimpleModelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.u0 > 0.0) || !(self.k > 0.0) || !(self.length > 0.0) {
            return Err(ModelError::InvalidParameter(format!(
                "u0, k and length must be positive (u0 = {}, k = {}, length = {})",
                self.u0, self.k, self.length
            )));
        }
        Ok(())
    }

    /// Residence time length / u0, the characteristic time separating the
    /// initial-condition-dominated and inlet-dominated solution regions.
    pub fn residence_time(&self) -> f64 {
        self.length / self.u0
    }

    /// True iff the initial and inlet data agree at the inlet corner, which
    /// makes the solution continuous across the characteristic x = u0 t.
    pub fn is_compatible(&self) -> bool {
        (self.t_init.value(0.0) - self.t_inlet.value(0.0)).abs() <= 1e-12 * self.t_star.abs().max(1.0)
    }
}
