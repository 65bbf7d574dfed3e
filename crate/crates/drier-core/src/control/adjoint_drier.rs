//! Adjoint of the three-equation drier model (linear and nonlinear flavours).
//!
//! Continuous form:
//!
//!   -psi_t - u0 psi_x - J^T psi = 0,   psi(x, tau) = 0,
//!   psi_s(l, t) = psi_l(l, t) = 0,  psi_T(l, t) = -(1/u0) * mismatch(t),
//!
//! with J the model Jacobian evaluated on a reference trajectory: frozen on
//! the equilibrium for the linear control problem, or read slice-by-slice
//! from a stored nonlinear trajectory. As in the simple model, the discrete
//! sweep is the exact transpose of the forward update, with the outlet
//! mismatch entering as a source on the outlet node of the psi_T component.

use crate::control::adjoint_simple::space_weights;
use crate::control::cost_time_weights;
use crate::error::{ModelError, Result};
use crate::field::TimeSeries;
use crate::grid::SpaceTimeGrid;
use crate::stencil::upwind_derivative_transpose_into;

/// Per-node 3x3 Jacobian with rows ordered (d eps_s, d eps_l, d T).
pub type NodeJacobian = [[f64; 3]; 3];

/// Supplies the per-node Jacobians of the reference trajectory at a given
/// time level. Frozen references ignore the level.
pub trait JacobianSource {
    fn n_nodes(&self) -> usize;
    fn fill_jacobians(&self, level: usize, out: &mut [NodeJacobian]);
}

/// Supplies the heat-forcing profile eta(x) = (time-unit factor)/(c_ps eps_s
/// + c_pl eps_l) at a given time level.
pub trait EtaSource {
    fn fill_eta(&self, level: usize, out: &mut [f64]);
}

/// A time-frozen Jacobian profile (the linear-control case).
impl JacobianSource for Vec<NodeJacobian> {
    fn n_nodes(&self) -> usize {
        self.len()
    }

    fn fill_jacobians(&self, _level: usize, out: &mut [NodeJacobian]) {
        out.copy_from_slice(self);
    }
}

/// A time-frozen eta profile (the linear-control case).
impl EtaSource for Vec<f64> {
    fn fill_eta(&self, _level: usize, out: &mut [f64]) {
        out.copy_from_slice(self);
    }
}

/// One time level of the three-component adjoint state.
#[derive(Debug, Clone)]
pub struct AdjointSlice {
    pub psi_s: Vec<f64>,
    pub psi_l: Vec<f64>,
    pub psi_t: Vec<f64>,
}

/// Full space-time adjoint trajectory (psi_s, psi_l, psi_T).
#[derive(Debug, Clone)]
pub struct AdjointDrierTrajectory {
    grid: SpaceTimeGrid,
    slices: Vec<AdjointSlice>,
}

impl AdjointDrierTrajectory {
    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn slice(&self, n: usize) -> &AdjointSlice {
        &self.slices[n]
    }
}

/// Backward sweep of the drier adjoint. `outlet_mismatch` is the outlet
/// tracking error (delta T for the linear problem, T - T_star for the
/// nonlinear one) sampled on the grid.
pub fn solve_adjoint_drier(
    jacobians: &dyn JacobianSource,
    outlet_mismatch: &TimeSeries,
    u0: f64,
    grid: &SpaceTimeGrid,
) -> Result<AdjointDrierTrajectory> {
    let mut slices: Vec<AdjointSlice> = Vec::with_capacity(grid.n_samples());
    adjoint_sweep_drier(jacobians, outlet_mismatch, u0, grid, |_, s, l, t| {
        slices.push(AdjointSlice { psi_s: s.to_vec(), psi_l: l.to_vec(), psi_t: t.to_vec() });
    })?;
    slices.reverse();
    Ok(AdjointDrierTrajectory { grid: *grid, slices })
}

/// Descent direction d(t_n) = integral_0^length psi_T(x, t_n) eta(x, t_n) dx.
pub fn gradient_drier(
    adjoint: &AdjointDrierTrajectory,
    eta: &dyn EtaSource,
    grid: &SpaceTimeGrid,
) -> Result<TimeSeries> {
    let weights = space_weights(grid);
    let mut eta_buf = vec![0.0; grid.n_nodes()];
    let mut values = Vec::with_capacity(grid.n_samples());
    for n in 0..grid.n_samples() {
        eta.fill_eta(n, &mut eta_buf);
        let psi_t = &adjoint.slice(n).psi_t;
        let acc: f64 = psi_t
            .iter()
            .zip(&eta_buf)
            .zip(&weights)
            .map(|((p, e), w)| p * e * w)
            .sum();
        values.push(acc);
    }
    TimeSeries::new(*grid, values)
}

/// Fused sweep returning the descent direction without storing the adjoint.
pub fn adjoint_gradient_drier(
    jacobians: &dyn JacobianSource,
    eta: &dyn EtaSource,
    outlet_mismatch: &TimeSeries,
    u0: f64,
    grid: &SpaceTimeGrid,
) -> Result<TimeSeries> {
    let weights = space_weights(grid);
    let mut eta_buf = vec![0.0; grid.n_nodes()];
    let mut values = vec![0.0; grid.n_samples()];
    adjoint_sweep_drier(jacobians, outlet_mismatch, u0, grid, |n, _, _, psi_t| {
        eta.fill_eta(n, &mut eta_buf);
        values[n] = psi_t
            .iter()
            .zip(&eta_buf)
            .zip(&weights)
            .map(|((p, e), w)| p * e * w)
            .sum();
    })?;
    TimeSeries::new(*grid, values)
}

/// Core backward march, emitting psi-normalized slices from level n_steps
/// down to level 0 (in that order).
fn adjoint_sweep_drier(
    jacobians: &dyn JacobianSource,
    outlet_mismatch: &TimeSeries,
    u0: f64,
    grid: &SpaceTimeGrid,
    mut emit: impl FnMut(usize, &[f64], &[f64], &[f64]),
) -> Result<()> {
    grid.require_cfl(u0)?;
    outlet_mismatch.require_same_grid(grid, "outlet mismatch")?;
    let n_nodes = grid.n_nodes();
    if jacobians.n_nodes() != n_nodes {
        return Err(ModelError::GridMismatch(format!(
            "jacobian source has {} nodes, grid has {n_nodes}",
            jacobians.n_nodes()
        )));
    }
    let last = n_nodes - 1;
    let m_steps = grid.n_steps();
    let dt = grid.dt();
    let nu = u0 * dt;
    let weights = space_weights(grid);
    let time_w = cost_time_weights(grid);
    let mismatch = outlet_mismatch.values();

    let zeros = vec![0.0; n_nodes];
    emit(m_steps, &zeros, &zeros, &zeros);

    let mut lam_s = vec![0.0; n_nodes];
    let mut lam_l = vec![0.0; n_nodes];
    let mut lam_t = vec![0.0; n_nodes];
    lam_t[last] = -time_w[m_steps] * mismatch[m_steps];

    let mut psi_s = vec![0.0; n_nodes];
    let mut psi_l = vec![0.0; n_nodes];
    let mut psi_t = vec![0.0; n_nodes];
    let mut gat_s = vec![0.0; n_nodes];
    let mut gat_l = vec![0.0; n_nodes];
    let mut gat_t = vec![0.0; n_nodes];
    let mut jac = vec![[[0.0; 3]; 3]; n_nodes];

    for m in (0..m_steps).rev() {
        for i in 1..n_nodes {
            psi_s[i] = lam_s[i] / weights[i];
            psi_l[i] = lam_l[i] / weights[i];
            psi_t[i] = lam_t[i] / weights[i];
        }
        psi_s[0] = 0.0;
        psi_l[0] = 0.0;
        psi_t[0] = 0.0;
        emit(m, &psi_s, &psi_l, &psi_t);
        if m == 0 {
            break;
        }

        // lambda^m = S_m^T lambda^{m+1} - w_m * mismatch_m * e_{T,outlet},
        // where S_m = I - nu A + dt J(., t_m) on the advanced rows.
        upwind_derivative_transpose_into(&lam_s, grid.dx(), &mut gat_s);
        upwind_derivative_transpose_into(&lam_l, grid.dx(), &mut gat_l);
        upwind_derivative_transpose_into(&lam_t, grid.dx(), &mut gat_t);
        jacobians.fill_jacobians(m, &mut jac);
        let mut checksum = 0.0;
        for i in 1..n_nodes {
            let j = &jac[i];
            let (s, l, t) = (lam_s[i], lam_l[i], lam_t[i]);
            // J^T lambda: column c of J multiplies component c.
            let js = j[0][0] * s + j[1][0] * l + j[2][0] * t;
            let jl = j[0][1] * s + j[1][1] * l + j[2][1] * t;
            let jt = j[0][2] * s + j[1][2] * l + j[2][2] * t;
            lam_s[i] = s - nu * gat_s[i] + dt * js;
            lam_l[i] = l - nu * gat_l[i] + dt * jl;
            lam_t[i] = t - nu * gat_t[i] + dt * jt;
            checksum += lam_s[i] + lam_l[i] + lam_t[i];
        }
        lam_s[0] = 0.0;
        lam_l[0] = 0.0;
        lam_t[0] = 0.0;
        lam_t[last] -= time_w[m] * mismatch[m];
        if !checksum.is_finite() {
            return Err(ModelError::Diverged {
                step: m,
                context: "non-finite multiplier in drier adjoint sweep".into(),
            });
        }
    }
    Ok(())
}
