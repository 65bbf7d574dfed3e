//! Ready-made descent problems: forward solve, adjoint sweep and cost wired
//! into a [`ControlProblem`] for the Barzilai-Borwein loop.

use crate::control::adjoint_drier::adjoint_gradient_drier;
use crate::control::adjoint_simple::adjoint_gradient_simple;
use crate::control::{cost, ControlProblem};
use crate::drier::{DrierParams, EquilibriumProfile, InletSeries, solve_forward_nonlinear};
use crate::grid::SpaceTimeGrid;
use crate::linstab::{
    eta_profile, jacobian_profile, solve_forward_linear, PerturbationInlet, TrajectoryEta,
    TrajectoryJacobians,
};
use crate::simple::{solve_forward_outlet, SimpleModelParams};

/// Track the set point of the one-equation model by the surroundings
/// temperature q(t). Default BB tolerances: tol_cost = 1e-10 * T_star^2 * tau.
pub fn simple_tracking_problem<'a>(
    params: &'a SimpleModelParams,
    grid: SpaceTimeGrid,
) -> ControlProblem<'a> {
    ControlProblem {
        grid,
        evaluate: Box::new(move |q| {
            let outlet = solve_forward_outlet(params, q, &grid)?;
            let j = cost(&outlet, params.t_star);
            let direction = adjoint_gradient_simple(params, &outlet, &grid)?;
            Ok((j, direction))
        }),
    }
}

/// Suppress the outlet temperature fluctuation of the linearized drier by a
/// heat-density perturbation dqdot(t) [W/m^3]. The Jacobian and the forcing
/// profile eta are frozen on the equilibrium.
pub fn linear_tracking_problem<'a>(
    equilibrium: &'a EquilibriumProfile,
    params: &'a DrierParams,
    inlet: &'a PerturbationInlet,
    grid: SpaceTimeGrid,
) -> crate::error::Result<ControlProblem<'a>> {
    let jacobians = jacobian_profile(equilibrium, params)?;
    let eta = eta_profile(equilibrium, params);
    Ok(ControlProblem {
        grid,
        evaluate: Box::new(move |dqdot| {
            let run = solve_forward_linear(equilibrium, params, inlet, dqdot, &grid, None)?;
            let j = cost(&run.outlet_d_temperature, 0.0);
            let direction = adjoint_gradient_drier(
                &jacobians,
                &eta,
                &run.outlet_d_temperature,
                params.u0,
                &grid,
            )?;
            Ok((j, direction))
        }),
    })
}

/// Hold the nonlinear drier's outlet temperature at `t_star` by the absolute
/// heat density qdot(t) [W/m^3]. Each evaluation stores the full forward
/// trajectory; the adjoint assembles Jacobians and eta from it slice by
/// slice.
pub fn nonlinear_tracking_problem<'a>(
    params: &'a DrierParams,
    inlet: &'a InletSeries,
    initial: &'a EquilibriumProfile,
    t_star: f64,
    grid: SpaceTimeGrid,
) -> ControlProblem<'a> {
    ControlProblem {
        grid,
        evaluate: Box::new(move |qdot| {
            let trajectory = solve_forward_nonlinear(params, qdot, inlet, &grid, Some(initial))?;
            let outlet = trajectory.outlet_temperature();
            let j = cost(&outlet, t_star);
            let jacobians = TrajectoryJacobians { trajectory: &trajectory, qdot, params };
            let eta = TrajectoryEta { trajectory: &trajectory, params };
            let mut mismatch = outlet;
            for v in mismatch.values_mut() {
                *v -= t_star;
            }
            let direction =
                adjoint_gradient_drier(&jacobians, &eta, &mismatch, params.u0, &grid)?;
            Ok((j, direction))
        }),
    }
}

/// The stopping default for tracking problems: 1e-10 * target^2 * tau.
pub fn default_cost_tolerance(target: f64, horizon: f64) -> f64 {
    1e-10 * target * target * horizon
}
