//! Linearization of the drier model about a reference state: Jacobian
//! assembly, eigenvalue diagnostics, the linear time-domain solver with
//! heat-source forcing, and the frequency-domain control formula.

mod frequency;
mod jacobian;
mod solver;

pub use frequency::{frequency_domain_control, transfer_outlet_response, InletAmplitudes};
pub use jacobian::{
    assemble_jacobian, integrated_jacobian_eigenvalues, jacobian_profile,
    positive_eigenvalue_integral, TrajectoryEta, TrajectoryJacobians,
};
pub use solver::{eta_profile, solve_forward_linear, LinearTrajectory, PerturbationInlet};

use crate::field::ScalarField;

/// Perturbation fields (d eps_s, d eps_l, d T) about a reference state.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationState {
    pub d_eps_s: ScalarField,
    pub d_eps_l: ScalarField,
    pub d_temperature: ScalarField,
}

impl PerturbationState {
    /// Largest amplitude relative to a reference scale, used to warn when a
    /// run leaves the linear regime (threshold 10%).
    pub fn max_relative_amplitude(&self, eps_scale: f64, temp_scale: f64) -> f64 {
        let mut m: f64 = 0.0;
        for v in self.d_eps_s.values().iter().chain(self.d_eps_l.values()) {
            m = m.max((v / eps_scale).abs());
        }
        for v in self.d_temperature.values() {
            m = m.max((v / temp_scale).abs());
        }
        m
    }
}
