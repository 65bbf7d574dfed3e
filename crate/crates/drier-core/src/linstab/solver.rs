//! Time-domain solver for the linearized system with heat-source forcing:
//!
//!   d(delta)/dt + u0 d(delta)/dx = J(x) delta + dqdot(t) (0, 0, eta(x))^T,
//!
//! with the Jacobian frozen on the equilibrium profile and
//! eta(x) = (unit factor) / (c_pl eps_l_eq(x) + c_ps eps_s0).

use crate::control::NodeJacobian;
use crate::drier::{DrierParams, EquilibriumProfile, SECONDS_PER_MINUTE};
use crate::error::{ModelError, Result};
use crate::field::{ScalarField, TimeSeries};
use crate::grid::SpaceTimeGrid;
use crate::linstab::jacobian::jacobian_profile;
use crate::linstab::PerturbationState;
use crate::stencil::upwind_derivative_into;

/// Inlet perturbation triple sampled on the time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationInlet {
    pub d_eps_s: Vec<f64>,
    pub d_eps_l: Vec<f64>,
    pub d_temperature: Vec<f64>,
}

impl PerturbationInlet {
    pub fn zero(grid: &SpaceTimeGrid) -> Self {
        let n = grid.n_samples();
        Self { d_eps_s: vec![0.0; n], d_eps_l: vec![0.0; n], d_temperature: vec![0.0; n] }
    }

    /// Monochromatic temperature forcing amplitude*sin(omega t); densities
    /// unperturbed.
    pub fn temperature_sinusoid(amplitude: f64, omega: f64, grid: &SpaceTimeGrid) -> Self {
        let mut inlet = Self::zero(grid);
        for (n, v) in inlet.d_temperature.iter_mut().enumerate() {
            *v = amplitude * (omega * grid.t(n)).sin();
        }
        inlet
    }

    /// Monochromatic liquid-density forcing; temperature and solid untouched.
    pub fn liquid_sinusoid(amplitude: f64, omega: f64, grid: &SpaceTimeGrid) -> Self {
        let mut inlet = Self::zero(grid);
        for (n, v) in inlet.d_eps_l.iter_mut().enumerate() {
            *v = amplitude * (omega * grid.t(n)).sin();
        }
        inlet
    }

    pub fn add(&self, other: &Self) -> Self {
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Self {
            d_eps_s: zip(&self.d_eps_s, &other.d_eps_s),
            d_eps_l: zip(&self.d_eps_l, &other.d_eps_l),
            d_temperature: zip(&self.d_temperature, &other.d_temperature),
        }
    }

    fn check(&self, grid: &SpaceTimeGrid) -> Result<()> {
        let n = grid.n_samples();
        if self.d_eps_s.len() != n || self.d_eps_l.len() != n || self.d_temperature.len() != n {
            return Err(ModelError::GridMismatch(format!(
                "perturbation inlet lengths ({}, {}, {}) do not match {n} samples",
                self.d_eps_s.len(),
                self.d_eps_l.len(),
                self.d_temperature.len()
            )));
        }
        Ok(())
    }
}

/// Result of a linear run: outlet series of all three perturbations plus the
/// final-time profile.
#[derive(Debug, Clone)]
pub struct LinearTrajectory {
    pub outlet_d_eps_s: TimeSeries,
    pub outlet_d_eps_l: TimeSeries,
    pub outlet_d_temperature: TimeSeries,
    pub final_state: PerturbationState,
}

/// Heat-forcing profile eta(x) on the equilibrium, including the W/m^3 ->
/// K/min unit factor.
pub fn eta_profile(equilibrium: &EquilibriumProfile, params: &DrierParams) -> Vec<f64> {
    equilibrium
        .eps_l
        .values()
        .iter()
        .map(|l| SECONDS_PER_MINUTE / (params.c_pl * l + params.c_ps * equilibrium.eps_s))
        .collect()
}

/// March the linearized system forward. Initial perturbation is zero unless
/// `initial` is given; the inlet node is pinned to the perturbation series.
pub fn solve_forward_linear(
    equilibrium: &EquilibriumProfile,
    params: &DrierParams,
    inlet: &PerturbationInlet,
    dqdot: &TimeSeries,
    grid: &SpaceTimeGrid,
    initial: Option<&PerturbationState>,
) -> Result<LinearTrajectory> {
    params.validate()?;
    grid.require_cfl(params.u0)?;
    dqdot.require_same_grid(grid, "heat-source perturbation")?;
    inlet.check(grid)?;
    equilibrium.eps_l.require_same_grid(grid, "equilibrium profile")?;

    let jacs: Vec<NodeJacobian> = jacobian_profile(equilibrium, params)?;
    let eta = eta_profile(equilibrium, params);

    let n_nodes = grid.n_nodes();
    let dt = grid.dt();
    let u0 = params.u0;

    let (mut ds, mut dl, mut dtp): (Vec<f64>, Vec<f64>, Vec<f64>) = match initial {
        Some(p) => (
            p.d_eps_s.values().to_vec(),
            p.d_eps_l.values().to_vec(),
            p.d_temperature.values().to_vec(),
        ),
        None => (vec![0.0; n_nodes], vec![0.0; n_nodes], vec![0.0; n_nodes]),
    };
    ds[0] = inlet.d_eps_s[0];
    dl[0] = inlet.d_eps_l[0];
    dtp[0] = inlet.d_temperature[0];

    let last = n_nodes - 1;
    let mut out_s = Vec::with_capacity(grid.n_samples());
    let mut out_l = Vec::with_capacity(grid.n_samples());
    let mut out_t = Vec::with_capacity(grid.n_samples());
    out_s.push(ds[last]);
    out_l.push(dl[last]);
    out_t.push(dtp[last]);

    let mut g_s = vec![0.0; n_nodes];
    let mut g_l = vec![0.0; n_nodes];
    let mut g_t = vec![0.0; n_nodes];

    for n in 0..grid.n_steps() {
        upwind_derivative_into(&ds, grid.dx(), &mut g_s);
        upwind_derivative_into(&dl, grid.dx(), &mut g_l);
        upwind_derivative_into(&dtp, grid.dx(), &mut g_t);
        let dq = dqdot.values()[n];
        let mut checksum = 0.0;
        for i in 1..n_nodes {
            let j = &jacs[i];
            let (s, l, t) = (ds[i], dl[i], dtp[i]);
            // row 0 of J is identically zero
            let coup_l = j[1][0] * s + j[1][1] * l;
            let coup_t = j[2][0] * s + j[2][1] * l + j[2][2] * t;
            ds[i] += dt * (-u0 * g_s[i]);
            dl[i] += dt * (-u0 * g_l[i] + coup_l);
            dtp[i] += dt * (-u0 * g_t[i] + coup_t + dq * eta[i]);
            checksum += ds[i] + dl[i] + dtp[i];
        }
        ds[0] = inlet.d_eps_s[n + 1];
        dl[0] = inlet.d_eps_l[n + 1];
        dtp[0] = inlet.d_temperature[n + 1];
        if !checksum.is_finite() {
            return Err(ModelError::Diverged {
                step: n + 1,
                context: "non-finite perturbation in linear sweep".into(),
            });
        }
        out_s.push(ds[last]);
        out_l.push(dl[last]);
        out_t.push(dtp[last]);
    }

    Ok(LinearTrajectory {
        outlet_d_eps_s: TimeSeries::new(*grid, out_s)?,
        outlet_d_eps_l: TimeSeries::new(*grid, out_l)?,
        outlet_d_temperature: TimeSeries::new(*grid, out_t)?,
        final_state: PerturbationState {
            d_eps_s: ScalarField::new(*grid, ds)?,
            d_eps_l: ScalarField::new(*grid, dl)?,
            d_temperature: ScalarField::new(*grid, dtp)?,
        },
    })
}
