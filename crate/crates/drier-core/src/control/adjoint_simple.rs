//! Adjoint of the one-equation model.
//!
//! Continuous form: -psi_t - u0 psi_x + k psi = 0 backward from psi(x, tau) = 0,
//! with the outlet mismatch folded into the boundary at x = length; the descent
//! direction is  d(t) = integral_0^length k psi(x, t) dx.
//!
//! Discretely, the backward sweep is the exact transpose of the forward update
//! (the interior stencil of the transpose is the mirrored second-order upwind
//! biased toward the outlet, with a reduced closure at the node next to it).
//! The multiplier of the pinned inlet row carries no control sensitivity and
//! is reported as zero. The outlet mismatch enters as a source on the outlet
//! node, weighted by the cost's trapezoid rule; in the continuum limit this is
//! the Dirichlet value psi(length, t) = -(1/u0) [T(length, t) - T_star].
//! Building the sweep as the transpose makes the discrete pairing
//! dJ = <gradient, dq> exact, which the descent loop and the finite-difference
//! verification both rely on.

use crate::control::{cost_time_weights, mismatch_series};
use crate::error::Result;
use crate::field::{ScalarField, TimeSeries};
use crate::grid::SpaceTimeGrid;
use crate::simple::SimpleModelParams;
use crate::stencil::upwind_derivative_transpose_into;

/// Space-time adjoint trajectory psi(x_i, t_n) of the one-equation model.
#[derive(Debug, Clone)]
pub struct AdjointSimpleTrajectory {
    grid: SpaceTimeGrid,
    slices: Vec<Vec<f64>>,
}

impl AdjointSimpleTrajectory {
    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn slice(&self, n: usize) -> &[f64] {
        &self.slices[n]
    }

    pub fn field(&self, n: usize) -> ScalarField {
        ScalarField::new(self.grid, self.slices[n].clone()).expect("slice matches grid")
    }
}

/// Backward sweep driven by the forward outlet series. Returns the full
/// adjoint trajectory; psi(x, tau) = 0 holds exactly.
pub fn solve_adjoint_simple(
    params: &SimpleModelParams,
    outlet: &TimeSeries,
    grid: &SpaceTimeGrid,
) -> Result<AdjointSimpleTrajectory> {
    let mut slices = vec![Vec::new(); grid.n_samples()];
    adjoint_sweep_simple(params, outlet, grid, |n, psi| slices[n] = psi.to_vec())?;
    Ok(AdjointSimpleTrajectory { grid: *grid, slices })
}

/// Descent direction d(t_n) = integral_0^length k psi(x, t_n) dx per sample.
pub fn gradient_simple(
    adjoint: &AdjointSimpleTrajectory,
    params: &SimpleModelParams,
    grid: &SpaceTimeGrid,
) -> Result<TimeSeries> {
    let weights = space_weights(grid);
    let mut values = Vec::with_capacity(grid.n_samples());
    for n in 0..grid.n_samples() {
        let psi = adjoint.slice(n);
        let integral: f64 = psi.iter().zip(&weights).map(|(p, w)| p * w).sum();
        values.push(params.k * integral);
    }
    TimeSeries::new(*grid, values)
}

/// Fused backward sweep that yields the descent direction without storing the
/// adjoint trajectory; identical arithmetic to the two-stage pipeline.
pub fn adjoint_gradient_simple(
    params: &SimpleModelParams,
    outlet: &TimeSeries,
    grid: &SpaceTimeGrid,
) -> Result<TimeSeries> {
    let weights = space_weights(grid);
    let mut values = vec![0.0; grid.n_samples()];
    adjoint_sweep_simple(params, outlet, grid, |n, psi| {
        values[n] = params.k * psi.iter().zip(&weights).map(|(p, w)| p * w).sum::<f64>();
    })?;
    TimeSeries::new(*grid, values)
}

/// Core backward march. Emits the psi slice for every time level, from n_steps
/// down to 0, in psi-normalized form (multiplier divided by the spatial
/// trapezoid weight; inlet node reported as zero).
fn adjoint_sweep_simple(
    params: &SimpleModelParams,
    outlet: &TimeSeries,
    grid: &SpaceTimeGrid,
    mut emit: impl FnMut(usize, &[f64]),
) -> Result<()> {
    params.validate()?;
    grid.require_cfl(params.u0)?;
    outlet.require_same_grid(grid, "outlet series")?;

    let n_nodes = grid.n_nodes();
    let last = n_nodes - 1;
    let m_steps = grid.n_steps();
    let dt = grid.dt();
    let nu = params.u0 * dt;
    let decay = params.k * dt;
    let weights = space_weights(grid);
    let time_w = cost_time_weights(grid);
    let mismatch = mismatch_series(outlet, params.t_star);

    // Terminal condition: psi(x, tau) = 0.
    emit(m_steps, &vec![0.0; n_nodes]);

    // lambda holds the transposed-step multiplier for the level being emitted.
    let mut lambda = vec![0.0; n_nodes];
    lambda[last] = -time_w[m_steps] * mismatch[m_steps];
    let mut psi = vec![0.0; n_nodes];
    let mut gathered = vec![0.0; n_nodes];

    for m in (0..m_steps).rev() {
        // Emit slice m as psi = lambda^{m+1} / weights.
        for i in 1..n_nodes {
            psi[i] = lambda[i] / weights[i];
        }
        psi[0] = 0.0;
        emit(m, &psi);

        if m == 0 {
            break;
        }
        // lambda^m = P^T lambda^{m+1} - w_m * mismatch_m * e_outlet
        upwind_derivative_transpose_into(&lambda, grid.dx(), &mut gathered);
        for i in 1..n_nodes {
            lambda[i] = (1.0 - decay) * lambda[i] - nu * gathered[i];
        }
        lambda[0] = 0.0;
        lambda[last] -= time_w[m] * mismatch[m];
    }
    Ok(())
}

pub(crate) fn space_weights(grid: &SpaceTimeGrid) -> Vec<f64> {
    let dx = grid.dx();
    let mut w = vec![dx; grid.n_nodes()];
    w[0] = 0.5 * dx;
    w[grid.n_cells()] = 0.5 * dx;
    w
}
