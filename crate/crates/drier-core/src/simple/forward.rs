//! Explicit second-order-upwind solver for the one-equation model.

use crate::error::{ModelError, Result};
use crate::field::{ScalarField, TimeSeries};
use crate::grid::SpaceTimeGrid;
use crate::simple::SimpleModelParams;
use crate::stencil::upwind_derivative_into;

/// Full space-time temperature trajectory of a forward run.
#[derive(Debug, Clone)]
pub struct SimpleTrajectory {
    grid: SpaceTimeGrid,
    /// Row n holds T(x_i, t_n) for all nodes i.
    slices: Vec<Vec<f64>>,
}

impl SimpleTrajectory {
    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn slice(&self, n: usize) -> &[f64] {
        &self.slices[n]
    }

    /// Outlet series T(length, t).
    pub fn outlet(&self) -> TimeSeries {
        let last = self.grid.n_cells();
        let values = self.slices.iter().map(|s| s[last]).collect();
        TimeSeries::new(self.grid, values).expect("trajectory slices match grid")
    }

    pub fn final_profile(&self) -> ScalarField {
        ScalarField::new(self.grid, self.slices[self.grid.n_steps()].clone())
            .expect("trajectory slices match grid")
    }
}

/// March the model forward with the scheme
///
///   T_i^{n+1} = T_i^n - dt u0 D_i[T^n] + dt k (q(t^n) - T_i^n),
///
/// pinning the inlet node to T_inlet(t^{n+1}) after each step. The control is
/// sampled on the grid's time axis; q(t^n) drives the step from n to n+1.
pub fn solve_forward(
    params: &SimpleModelParams,
    q: &TimeSeries,
    grid: &SpaceTimeGrid,
) -> Result<SimpleTrajectory> {
    let mut slices = Vec::with_capacity(grid.n_samples());
    forward_sweep(params, q, grid, |_, state| slices.push(state.to_vec()))?;
    Ok(SimpleTrajectory { grid: *grid, slices })
}

/// Same sweep, recording only the outlet series. Used by the descent loop,
/// which needs nothing else from the forward run.
pub fn solve_forward_outlet(
    params: &SimpleModelParams,
    q: &TimeSeries,
    grid: &SpaceTimeGrid,
) -> Result<TimeSeries> {
    let last = grid.n_cells();
    let mut values = Vec::with_capacity(grid.n_samples());
    forward_sweep(params, q, grid, |_, state| values.push(state[last]))?;
    TimeSeries::new(*grid, values)
}

fn forward_sweep(
    params: &SimpleModelParams,
    q: &TimeSeries,
    grid: &SpaceTimeGrid,
    mut record: impl FnMut(usize, &[f64]),
) -> Result<()> {
    params.validate()?;
    grid.require_cfl(params.u0)?;
    q.require_same_grid(grid, "control")?;

    let n_nodes = grid.n_nodes();
    let mut state: Vec<f64> = (0..n_nodes).map(|i| params.t_init.value(grid.x(i))).collect();
    state[0] = params.t_inlet.value(0.0);
    record(0, &state);

    let mut deriv = vec![0.0; n_nodes];
    let dt = grid.dt();
    let k = params.k;
    let u0 = params.u0;

    for n in 0..grid.n_steps() {
        upwind_derivative_into(&state, grid.dx(), &mut deriv);
        let q_n = q.values()[n];
        let mut checksum = 0.0;
        for i in 1..n_nodes {
            state[i] += dt * (-u0 * deriv[i] + k * (q_n - state[i]));
            checksum += state[i];
        }
        state[0] = params.t_inlet.value(grid.t(n + 1));
        if !checksum.is_finite() {
            return Err(ModelError::Diverged {
                step: n + 1,
                context: "non-finite temperature in simple-model forward sweep".into(),
            });
        }
        record(n + 1, &state);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Signal;

    fn heating_params() -> SimpleModelParams {
        SimpleModelParams {
            u0: 1.0,
            k: 0.5,
            length: 5.0,
            t_star: 100.0,
            t_init: Signal::Constant(100.0),
            t_inlet: Signal::sinusoid(100.0, 10.0, 2.0 * std::f64::consts::PI),
        }
    }

    #[test]
    fn constant_everything_is_a_fixed_point() {
        let c = 42.0;
        let params = SimpleModelParams {
            u0: 1.0,
            k: 0.5,
            length: 5.0,
            t_star: c,
            t_init: Signal::Constant(c),
            t_inlet: Signal::Constant(c),
        };
        let grid = SpaceTimeGrid::new(5.0, 50, 2.0, 2000).unwrap();
        let q = TimeSeries::constant(grid, c);
        let traj = solve_forward(&params, &q, &grid).unwrap();
        for n in [0, 500, 2000] {
            for &v in traj.slice(n) {
                assert!((v - c).abs() < 1e-12, "drifted to {v}");
            }
        }
    }

    #[test]
    fn cfl_violation_is_reported() {
        let params = heating_params();
        let grid = SpaceTimeGrid::new(5.0, 200, 1.0, 10).unwrap(); // dt = 0.1 > dx/u0 = 0.025
        let q = TimeSeries::constant(grid, 100.0);
        assert!(matches!(
            solve_forward(&params, &q, &grid),
            Err(ModelError::CflViolation { .. })
        ));
    }

    #[test]
    fn control_on_wrong_grid_is_rejected() {
        let params = heating_params();
        let grid = SpaceTimeGrid::new(5.0, 100, 1.0, 1000).unwrap();
        let other = SpaceTimeGrid::new(5.0, 100, 1.0, 500).unwrap();
        let q = TimeSeries::constant(other, 100.0);
        assert!(matches!(
            solve_forward(&params, &q, &grid),
            Err(ModelError::GridMismatch(_))
        ));
    }
}
