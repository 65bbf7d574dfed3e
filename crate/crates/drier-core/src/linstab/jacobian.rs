//! Analytic Jacobian of the model right-hand side (0, -mdot, H) with respect
//! to (eps_s, eps_l, T), and the positive eigenvalue of its spatial integral.

use crate::control::{EtaSource, JacobianSource, NodeJacobian};
use crate::drier::{
    drying_rate, heat_source_density, DrierParams, DrierTrajectory, EquilibriumProfile,
    NodeState, SECONDS_PER_MINUTE,
};
use crate::error::{ModelError, Result};
use crate::field::TimeSeries;
use crate::quadrature::cumulative_trapezoid;

/// Per-node Jacobian at one reference state. Row 0 is identically zero (the
/// solid density equation has no source). `qdot_w` is the heat density the
/// reference operates at, in W/m^3.
pub fn assemble_jacobian(state: NodeState, qdot_w: f64, params: &DrierParams) -> Result<NodeJacobian> {
    let capacity = params.c_ps * state.eps_s + params.c_pl * state.eps_l;
    if !(capacity > 0.0) {
        return Err(ModelError::SingularState(format!(
            "volumetric heat capacity {capacity} while assembling the Jacobian"
        )));
    }
    let mdot = drying_rate(state, params);
    let clamped = params.clamp_condensation && params.k_f * (state.eps_l - params.x_star * state.eps_s) < 0.0;
    // Partials of mdot; zero in the clamped branch.
    let (dm_ds, dm_dl) = if clamped { (0.0, 0.0) } else { (-params.k_f * params.x_star, params.k_f) };
    let latent = params.h_l - params.c_pl * (state.temperature - params.t_ref);
    let h = (SECONDS_PER_MINUTE * qdot_w - mdot * latent) / capacity;
    // H = (q - mdot * latent)/capacity
    let dh_ds = (-dm_ds * latent - h * params.c_ps) / capacity;
    let dh_dl = (-dm_dl * latent - h * params.c_pl) / capacity;
    let dh_dt = mdot * params.c_pl / capacity;
    Ok([
        [0.0, 0.0, 0.0],
        [-dm_ds, -dm_dl, 0.0],
        [dh_ds, dh_dl, dh_dt],
    ])
}

/// Jacobian at every node of an equilibrium profile, frozen in time.
pub fn jacobian_profile(
    equilibrium: &EquilibriumProfile,
    params: &DrierParams,
) -> Result<Vec<NodeJacobian>> {
    let qdot = heat_source_density(params);
    let grid = equilibrium.eps_l.grid();
    let mut out = Vec::with_capacity(grid.n_nodes());
    for i in 0..grid.n_nodes() {
        let state = NodeState {
            eps_s: equilibrium.eps_s,
            eps_l: equilibrium.eps_l.values()[i],
            temperature: equilibrium.temperature.values()[i],
        };
        out.push(assemble_jacobian(state, qdot, params)?);
    }
    Ok(out)
}

/// Positive eigenvalue of the integrated Jacobian,
/// lambda_+(x) = integral_0^x mdot c_pl / (c_ps eps_s + c_pl eps_l) dx',
/// evaluated on the equilibrium profile by the trapezoid rule. Returns the
/// cumulative values at every node; the growth factor at x is
/// exp(lambda_+(x)/u0).
pub fn positive_eigenvalue_integral(
    equilibrium: &EquilibriumProfile,
    params: &DrierParams,
) -> Vec<f64> {
    let grid = equilibrium.eps_l.grid();
    let integrand: Vec<f64> = (0..grid.n_nodes())
        .map(|i| {
            let eps_l = equilibrium.eps_l.values()[i];
            let state = NodeState {
                eps_s: equilibrium.eps_s,
                eps_l,
                temperature: equilibrium.temperature.values()[i],
            };
            let capacity = params.c_ps * equilibrium.eps_s + params.c_pl * eps_l;
            drying_rate(state, params) * params.c_pl / capacity
        })
        .collect();
    cumulative_trapezoid(&integrand, grid.dx())
}

/// Eigenvalues of the reduced 2x2 block of integral_0^x J dx' (the zero row
/// contributes the third, zero eigenvalue). With constant k_f and X_* this is
/// (-k_f x, lambda_+(x)): one nonpositive, one nonnegative.
pub fn integrated_jacobian_eigenvalues(
    equilibrium: &EquilibriumProfile,
    params: &DrierParams,
    node: usize,
) -> Result<(f64, f64)> {
    let grid = equilibrium.eps_l.grid();
    if node >= grid.n_nodes() {
        return Err(ModelError::Domain(format!("node {node} outside grid")));
    }
    let jacs = jacobian_profile(equilibrium, params)?;
    // Trapezoid integrals of the 2x2 block entries (d eps_l, d T rows/cols).
    let dx = grid.dx();
    let mut a11 = 0.0; // -d mdot/d eps_l
    let mut a12 = 0.0; // -d mdot/d T
    let mut a21 = 0.0; // d H/d eps_l
    let mut a22 = 0.0; // d H/d T
    for (i, jac) in jacs.iter().enumerate().take(node + 1) {
        let w = if i == 0 || i == node { 0.5 * dx } else { dx };
        a11 += w * jac[1][1];
        a12 += w * jac[1][2];
        a21 += w * jac[2][1];
        a22 += w * jac[2][2];
    }
    if node == 0 {
        return Ok((0.0, 0.0));
    }
    let trace = a11 + a22;
    let det = a11 * a22 - a12 * a21;
    let disc = (trace * trace - 4.0 * det).max(0.0).sqrt();
    Ok(((trace - disc) / 2.0, (trace + disc) / 2.0))
}

/// Jacobians read slice-by-slice from a stored nonlinear trajectory (the
/// nonlinear adjoint case). Assembled on the fly to keep memory at O(N)
/// beyond the trajectory itself.
pub struct TrajectoryJacobians<'a> {
    pub trajectory: &'a DrierTrajectory,
    pub qdot: &'a TimeSeries,
    pub params: &'a DrierParams,
}

impl JacobianSource for TrajectoryJacobians<'_> {
    fn n_nodes(&self) -> usize {
        self.trajectory.grid().n_nodes()
    }

    fn fill_jacobians(&self, level: usize, out: &mut [NodeJacobian]) {
        let s = self.trajectory.eps_s_slice(level);
        let l = self.trajectory.eps_l_slice(level);
        let t = self.trajectory.temperature_slice(level);
        // The control sample that drove this level's step.
        let q = self.qdot.values()[level.min(self.qdot.values().len() - 1)];
        for i in 0..out.len() {
            let state = NodeState { eps_s: s[i], eps_l: l[i], temperature: t[i] };
            out[i] = assemble_jacobian(state, q, self.params)
                .expect("forward sweep already rejected singular states");
        }
    }
}

/// eta(x, t) = 60 / (c_ps eps_s + c_pl eps_l) read from a stored trajectory;
/// the factor 60 converts the W/m^3 control into the K/min temperature rate.
pub struct TrajectoryEta<'a> {
    pub trajectory: &'a DrierTrajectory,
    pub params: &'a DrierParams,
}

impl EtaSource for TrajectoryEta<'_> {
    fn fill_eta(&self, level: usize, out: &mut [f64]) {
        let s = self.trajectory.eps_s_slice(level);
        let l = self.trajectory.eps_l_slice(level);
        for i in 0..out.len() {
            out[i] = SECONDS_PER_MINUTE / (self.params.c_ps * s[i] + self.params.c_pl * l[i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drier::{energy_rhs, solve_equilibrium, disk_drier_params};
    use crate::grid::SpaceTimeGrid;

    fn grid() -> SpaceTimeGrid {
        SpaceTimeGrid::new(10.0, 200, 60.0, 7200).unwrap()
    }

    #[test]
    fn first_row_is_zero_and_dh_dt_vanishes_at_equilibrium_moisture() {
        let p = disk_drier_params();
        let state = NodeState { eps_s: 30.0, eps_l: 3.0, temperature: 70.0 }; // mdot = 0
        let j = assemble_jacobian(state, heat_source_density(&p), &p).unwrap();
        assert_eq!(j[0], [0.0, 0.0, 0.0]);
        assert_eq!(j[2][2], 0.0);
    }

    #[test]
    fn jacobian_matches_central_finite_differences() {
        let p = disk_drier_params();
        let qdot = heat_source_density(&p);
        let state = NodeState { eps_s: p.eps_s_inlet, eps_l: p.eps_l_inlet, temperature: 80.0 };
        let j = assemble_jacobian(state, qdot, &p).unwrap();

        let f = |s: NodeState| -> (f64, f64) {
            (-drying_rate(s, &p), energy_rhs(s, qdot, &p).unwrap())
        };
        let h = 1e-5;
        let bump = |ds: f64, dl: f64, dt: f64| NodeState {
            eps_s: state.eps_s + ds,
            eps_l: state.eps_l + dl,
            temperature: state.temperature + dt,
        };
        let checks = [
            (1, 0, (f(bump(h, 0.0, 0.0)).0 - f(bump(-h, 0.0, 0.0)).0) / (2.0 * h)),
            (1, 1, (f(bump(0.0, h, 0.0)).0 - f(bump(0.0, -h, 0.0)).0) / (2.0 * h)),
            (2, 0, (f(bump(h, 0.0, 0.0)).1 - f(bump(-h, 0.0, 0.0)).1) / (2.0 * h)),
            (2, 1, (f(bump(0.0, h, 0.0)).1 - f(bump(0.0, -h, 0.0)).1) / (2.0 * h)),
            (2, 2, (f(bump(0.0, 0.0, h)).1 - f(bump(0.0, 0.0, -h)).1) / (2.0 * h)),
        ];
        for (row, col, fd) in checks {
            let rel = (j[row][col] - fd).abs() / fd.abs().max(1e-12);
            assert!(rel < 1e-6, "J[{row}][{col}] = {}, fd = {fd}, rel = {rel}", j[row][col]);
        }
        // d mdot/dT = 0 exactly
        assert_eq!(j[1][2], 0.0);
    }

    #[test]
    fn positive_eigenvalue_matches_refined_quadrature() {
        let p = disk_drier_params();
        let g = grid();
        let eq = solve_equilibrium(&p, &g).unwrap();
        let lam = positive_eigenvalue_integral(&eq, &p);
        assert_eq!(lam[0], 0.0);
        let lam_out = lam[g.n_cells()];
        assert!(lam_out > 0.0);

        // 10x refined grid as quadrature oracle.
        let fine = SpaceTimeGrid::new(10.0, 2000, 60.0, 7200).unwrap();
        let eq_fine = solve_equilibrium(&p, &fine).unwrap();
        let lam_fine = positive_eigenvalue_integral(&eq_fine, &p);
        let rel = (lam_out - lam_fine[fine.n_cells()]).abs() / lam_fine[fine.n_cells()];
        // trapezoid at N=200 carries O(dx^2) ~ 6e-5 relative error
        assert!(rel < 5e-4, "lambda_+(l) = {lam_out}, refined {}", lam_fine[fine.n_cells()]);
        // hand-computed value for the reference drier: 0.04161 m/min, growth 1.133
        assert!((lam_out - 0.04161).abs() < 2e-4, "lambda_+ = {lam_out}");
        let growth = (lam_out / p.u0).exp();
        assert!((growth - 1.133).abs() < 2e-3, "growth factor {growth}");
    }

    #[test]
    fn saturated_equilibrium_has_zero_positive_eigenvalue() {
        let base = disk_drier_params();
        let p = DrierParams { eps_l_inlet: base.x_star * base.eps_s_inlet, ..base };
        let g = grid();
        let eq = solve_equilibrium(&p, &g).unwrap();
        let lam = positive_eigenvalue_integral(&eq, &p);
        for v in &lam {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn reduced_block_has_signed_eigenvalue_pair() {
        let p = disk_drier_params();
        let g = grid();
        let eq = solve_equilibrium(&p, &g).unwrap();
        let node = g.n_cells();
        let (lo, hi) = integrated_jacobian_eigenvalues(&eq, &p, node).unwrap();
        // one nonpositive (-k_f x) and one nonnegative (lambda_+)
        assert!(lo <= 0.0 && hi >= 0.0, "eigenvalues ({lo}, {hi})");
        assert!((lo + p.k_f * g.length()).abs() < 1e-9, "lo = {lo} vs -k_f l = {}", -p.k_f * g.length());
        let lam = positive_eigenvalue_integral(&eq, &p);
        assert!((hi - lam[node]).abs() < 1e-9);
    }
}
