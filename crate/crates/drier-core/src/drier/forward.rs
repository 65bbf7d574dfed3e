//! Explicit forward solver for the coupled three-equation system.

use crate::drier::closure::{drying_rate, NodeState};
use crate::drier::trajectory::DrierTrajectory;
use crate::drier::{DrierParams, EquilibriumProfile, SECONDS_PER_MINUTE};
use crate::error::{ModelError, Result};
use crate::field::TimeSeries;
use crate::grid::SpaceTimeGrid;
use crate::signal::Signal;
use crate::stencil::upwind_derivative_into;

/// Time-dependent inlet triple sampled on the run's time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct InletSeries {
    pub eps_s: Vec<f64>,
    pub eps_l: Vec<f64>,
    pub temperature: Vec<f64>,
}

impl InletSeries {
    pub fn constant(params: &DrierParams, grid: &SpaceTimeGrid) -> Self {
        let n = grid.n_samples();
        Self {
            eps_s: vec![params.eps_s_inlet; n],
            eps_l: vec![params.eps_l_inlet; n],
            temperature: vec![params.t_inlet; n],
        }
    }

    /// Relative sinusoidal modulation of the liquid density and temperature
    /// about a base inlet state:
    ///   eps_l(0,t) = eps_l0 [1 + delta_alpha sin(omega t)], same for T;
    /// the solid density stays constant.
    pub fn modulated(
        eps_s0: f64,
        eps_l0: f64,
        t0: f64,
        delta_alpha: f64,
        omega: f64,
        grid: &SpaceTimeGrid,
    ) -> Self {
        let n = grid.n_samples();
        let factor = |t: f64| 1.0 + delta_alpha * (omega * t).sin();
        Self {
            eps_s: vec![eps_s0; n],
            eps_l: (0..n).map(|i| eps_l0 * factor(grid.t(i))).collect(),
            temperature: (0..n).map(|i| t0 * factor(grid.t(i))).collect(),
        }
    }

    /// Arbitrary signal triple sampled on the grid.
    pub fn from_signals(
        eps_s: &Signal,
        eps_l: &Signal,
        temperature: &Signal,
        grid: &SpaceTimeGrid,
    ) -> Self {
        let n = grid.n_samples();
        Self {
            eps_s: (0..n).map(|i| eps_s.value(grid.t(i))).collect(),
            eps_l: (0..n).map(|i| eps_l.value(grid.t(i))).collect(),
            temperature: (0..n).map(|i| temperature.value(grid.t(i))).collect(),
        }
    }

    fn check(&self, grid: &SpaceTimeGrid) -> Result<()> {
        let n = grid.n_samples();
        if self.eps_s.len() != n || self.eps_l.len() != n || self.temperature.len() != n {
            return Err(ModelError::GridMismatch(format!(
                "inlet triple has lengths ({}, {}, {}), grid has {n} samples",
                self.eps_s.len(),
                self.eps_l.len(),
                self.temperature.len()
            )));
        }
        Ok(())
    }
}

/// Advance the three coupled equations with the upwind stencil and store the
/// full space-time trajectory (the nonlinear adjoint needs the forward
/// variables at all points). `qdot` is the heat-source density control in
/// W/m^3 sampled on the time grid; q(t^n) drives the step n -> n+1.
pub fn solve_forward_nonlinear(
    params: &DrierParams,
    qdot: &TimeSeries,
    inlet: &InletSeries,
    grid: &SpaceTimeGrid,
    initial: Option<&EquilibriumProfile>,
) -> Result<DrierTrajectory> {
    params.validate()?;
    grid.require_cfl(params.u0)?;
    qdot.require_same_grid(grid, "heat-source control")?;
    inlet.check(grid)?;

    let n_nodes = grid.n_nodes();
    let dt = grid.dt();
    let dx = grid.dx();
    let u0 = params.u0;

    let (mut eps_s, mut eps_l, mut temp): (Vec<f64>, Vec<f64>, Vec<f64>) = match initial {
        Some(eq) => (
            vec![eq.eps_s; n_nodes],
            eq.eps_l.values().to_vec(),
            eq.temperature.values().to_vec(),
        ),
        None => (
            vec![params.eps_s_inlet; n_nodes],
            vec![params.eps_l_inlet; n_nodes],
            vec![params.t_inlet; n_nodes],
        ),
    };
    eps_s[0] = inlet.eps_s[0];
    eps_l[0] = inlet.eps_l[0];
    temp[0] = inlet.temperature[0];

    let mut trajectory = DrierTrajectory::with_capacity(*grid);
    trajectory.push_slice(&eps_s, &eps_l, &temp);

    let mut d_s = vec![0.0; n_nodes];
    let mut d_l = vec![0.0; n_nodes];
    let mut d_t = vec![0.0; n_nodes];

    for n in 0..grid.n_steps() {
        upwind_derivative_into(&eps_s, dx, &mut d_s);
        upwind_derivative_into(&eps_l, dx, &mut d_l);
        upwind_derivative_into(&temp, dx, &mut d_t);
        let q_n = SECONDS_PER_MINUTE * qdot.values()[n];
        let mut checksum = 0.0;
        for i in 1..n_nodes {
            let state = NodeState { eps_s: eps_s[i], eps_l: eps_l[i], temperature: temp[i] };
            let mdot = drying_rate(state, params);
            let capacity = params.c_ps * eps_s[i] + params.c_pl * eps_l[i];
            if !(capacity > 0.0) {
                return Err(ModelError::SingularState(format!(
                    "volumetric heat capacity {capacity} at node {i}, step {n}"
                )));
            }
            let h = (q_n - mdot * (params.h_l - params.c_pl * (temp[i] - params.t_ref))) / capacity;
            eps_s[i] -= dt * u0 * d_s[i];
            eps_l[i] += dt * (-u0 * d_l[i] - mdot);
            temp[i] += dt * (-u0 * d_t[i] + h);
            checksum += eps_s[i] + eps_l[i] + temp[i];
            if eps_s[i] <= 0.0 {
                return Err(ModelError::Diverged {
                    step: n + 1,
                    context: format!("solid density became nonpositive ({}) at node {i}", eps_s[i]),
                });
            }
        }
        eps_s[0] = inlet.eps_s[n + 1];
        eps_l[0] = inlet.eps_l[n + 1];
        temp[0] = inlet.temperature[n + 1];
        if !checksum.is_finite() {
            return Err(ModelError::Diverged {
                step: n + 1,
                context: "non-finite state in drier forward sweep".into(),
            });
        }
        trajectory.push_slice(&eps_s, &eps_l, &temp);
    }
    Ok(trajectory)
}
