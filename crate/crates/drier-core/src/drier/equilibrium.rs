//! Steady solutions under constant inlet conditions, and the Peclet
//! diagnostic justifying the diffusion-free model.

use crate::drier::closure::{energy_rhs, heat_source_density, NodeState};
use crate::drier::{DrierParams, DrierState, SECONDS_PER_MINUTE};
use crate::error::Result;
use crate::field::ScalarField;
use crate::grid::SpaceTimeGrid;

/// Equilibrium profile: constant solid density, exponentially relaxing
/// moisture, temperature from the spatial energy ODE.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumProfile {
    pub eps_s: f64,
    pub eps_l: ScalarField,
    pub temperature: ScalarField,
}

impl EquilibriumProfile {
    pub fn state(&self) -> DrierState {
        DrierState {
            eps_s: ScalarField::constant(*self.eps_l.grid(), self.eps_s),
            eps_l: self.eps_l.clone(),
            temperature: self.temperature.clone(),
        }
    }

    pub fn outlet_temperature(&self) -> f64 {
        *self.temperature.values().last().expect("profile has nodes")
    }

    pub fn outlet_moisture(&self) -> f64 {
        self.eps_l.values().last().expect("profile has nodes") / self.eps_s
    }
}

/// Closed-form equilibrium moisture
/// eps_w(x) = eps_w0 e^{-k_f x/u0} + eps_s0 X_* (1 - e^{-k_f x/u0}).
pub fn equilibrium_moisture(params: &DrierParams, x: f64) -> f64 {
    let decay = (-params.k_f * x / params.u0).exp();
    params.eps_l_inlet * decay + params.eps_s_inlet * params.x_star * (1.0 - decay)
}

/// Continuum equilibrium: eps_s constant, eps_w from the closed form, and the
/// temperature from integrating u0 dT/dx = H with a classical fourth-order
/// one-step march on the spatial grid (the closed-form eps_w supplies exact
/// stage values at the half nodes).
pub fn solve_equilibrium(params: &DrierParams, grid: &SpaceTimeGrid) -> Result<EquilibriumProfile> {
    params.validate()?;
    let qdot = heat_source_density(params);
    let n = grid.n_nodes();
    let dx = grid.dx();

    let eps_l = ScalarField::from_fn(*grid, |x| equilibrium_moisture(params, x));

    let slope = |x: f64, t: f64| -> Result<f64> {
        let state = NodeState { eps_s: params.eps_s_inlet, eps_l: equilibrium_moisture(params, x), temperature: t };
        Ok(energy_rhs(state, qdot, params)? / params.u0)
    };

    let mut temperature = Vec::with_capacity(n);
    let mut t = params.t_inlet;
    temperature.push(t);
    for i in 0..n - 1 {
        let x = grid.x(i);
        let k1 = slope(x, t)?;
        let k2 = slope(x + 0.5 * dx, t + 0.5 * dx * k1)?;
        let k3 = slope(x + 0.5 * dx, t + 0.5 * dx * k2)?;
        let k4 = slope(x + dx, t + dx * k3)?;
        t += dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        temperature.push(t);
    }

    Ok(EquilibriumProfile { eps_s: params.eps_s_inlet, eps_l, temperature: ScalarField::new(*grid, temperature)? })
}

/// Fixed point of the discrete upwind operator: the steady state the forward
/// solver actually holds. Obtained by marching the steady stencil equations
/// node by node (each is linear in the unknown node value).
pub fn discrete_equilibrium(params: &DrierParams, grid: &SpaceTimeGrid) -> Result<EquilibriumProfile> {
    params.validate()?;
    let qdot_per_min = SECONDS_PER_MINUTE * heat_source_density(params);
    let n = grid.n_nodes();
    let dx = grid.dx();
    let u0 = params.u0;

    let mut eps_l = Vec::with_capacity(n);
    let mut temperature = Vec::with_capacity(n);
    eps_l.push(params.eps_l_inlet);
    temperature.push(params.t_inlet);
    let eps_s = params.eps_s_inlet;

    for i in 1..n {
        // Steady advection balance with the same stencil the solver applies:
        // first-order at node 1, second-order elsewhere.
        let (transport, upstream_l, upstream_t) = if i == 1 {
            (u0 / dx, (u0 / dx) * eps_l[0], (u0 / dx) * temperature[0])
        } else {
            let b = u0 / (2.0 * dx);
            (
                3.0 * b,
                b * (4.0 * eps_l[i - 1] - eps_l[i - 2]),
                b * (4.0 * temperature[i - 1] - temperature[i - 2]),
            )
        };
        // transport * eps_l_i - upstream_l = -k_f (eps_l_i - X_* eps_s)
        let l_i = (upstream_l + params.k_f * params.x_star * eps_s) / (transport + params.k_f);
        eps_l.push(l_i);
        // transport * T_i - upstream_t = H_i, linear in T_i through mdot c_pl T.
        let mdot = params.k_f * (l_i - params.x_star * eps_s);
        let capacity = params.c_ps * eps_s + params.c_pl * l_i;
        let constant = (qdot_per_min - mdot * (params.h_l + params.c_pl * params.t_ref)) / capacity;
        let t_coeff = mdot * params.c_pl / capacity;
        let t_i = (upstream_t + constant) / (transport - t_coeff);
        temperature.push(t_i);
    }

    Ok(EquilibriumProfile {
        eps_s,
        eps_l: ScalarField::new(*grid, eps_l)?,
        temperature: ScalarField::new(*grid, temperature)?,
    })
}

/// Peclet number Pe = u0 * length * (c_ps eps_s + c_pl eps_l)_inlet / k_cond,
/// with u0 converted to m/s.
pub fn peclet_number(params: &DrierParams) -> f64 {
    (params.u0 / SECONDS_PER_MINUTE) * params.length * params.inlet_heat_capacity() / params.k_cond
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drier::closure::drying_rate;
    use crate::drier::disk_drier_params;

    fn grid(n_cells: usize) -> SpaceTimeGrid {
        SpaceTimeGrid::new(10.0, n_cells, 120.0, 36_000).unwrap()
    }

    #[test]
    fn peclet_matches_reported_value() {
        let p = disk_drier_params();
        let pe = peclet_number(&p);
        assert!((pe - 8172.0).abs() / 8172.0 < 0.01, "Pe = {pe}");
        // inverse proportional to conductivity, proportional to u0 at fixed eps
        let double_k = DrierParams { k_cond: 1.2, ..p.clone() };
        assert!((peclet_number(&double_k) - pe / 2.0).abs() < 1e-9);
        let double_u = DrierParams { u0: 2.0 * p.u0, ..p };
        assert!((peclet_number(&double_u) - 2.0 * pe).abs() < 1e-9);
    }

    #[test]
    fn moisture_closed_form_and_outlet_level() {
        let p = disk_drier_params();
        // k_f length / u0 = 6
        let decay = (-6.0f64).exp();
        let expect = p.eps_l_inlet * decay + p.eps_s_inlet * 0.1 * (1.0 - decay);
        assert!((equilibrium_moisture(&p, 10.0) - expect).abs() < 1e-12);
        let eq = solve_equilibrium(&p, &grid(200)).unwrap();
        let x_out = eq.outlet_moisture();
        assert!(
            (x_out - 0.1).abs() / 0.1 < 0.003,
            "outlet moisture {x_out} deviates more than 0.3% from X_*"
        );
    }

    #[test]
    fn saturated_inlet_gives_linear_temperature() {
        // eps_w0 = X_* eps_s0: mdot vanishes identically, T grows linearly
        // with slope qdot/(u0 sum c_p eps); the fourth-order march integrates
        // a constant slope exactly.
        let base = disk_drier_params();
        let p = DrierParams { eps_l_inlet: base.x_star * base.eps_s_inlet, ..base };
        let g = grid(100);
        let eq = solve_equilibrium(&p, &g).unwrap();
        let capacity = p.inlet_heat_capacity();
        let slope = SECONDS_PER_MINUTE * heat_source_density(&p) / (p.u0 * capacity);
        for i in 0..g.n_nodes() {
            let expected = p.t_inlet + slope * g.x(i);
            assert!(
                (eq.temperature.values()[i] - expected).abs() < 1e-9,
                "node {i}: {} vs {expected}",
                eq.temperature.values()[i]
            );
            assert!((eq.eps_l.values()[i] - p.eps_l_inlet).abs() < 1e-12);
        }
    }

    #[test]
    fn temperature_march_agrees_with_refined_march() {
        let p = disk_drier_params();
        let coarse = solve_equilibrium(&p, &grid(200)).unwrap();
        let fine = solve_equilibrium(&p, &grid(2000)).unwrap();
        let t_out_coarse = coarse.outlet_temperature();
        let t_out_fine = fine.outlet_temperature();
        let rel = (t_out_coarse - t_out_fine).abs() / t_out_fine.abs();
        assert!(rel < 1e-6, "relative disagreement {rel}");
    }

    #[test]
    fn discrete_equilibrium_is_a_stencil_fixed_point() {
        use crate::stencil::upwind_derivative_into;
        let p = disk_drier_params();
        let g = grid(200);
        let eq = discrete_equilibrium(&p, &g).unwrap();
        let qdot = heat_source_density(&p);

        // Residual of the steady equations under the solver's stencil.
        let n = g.n_nodes();
        let mut d_l = vec![0.0; n];
        let mut d_t = vec![0.0; n];
        upwind_derivative_into(eq.eps_l.values(), g.dx(), &mut d_l);
        upwind_derivative_into(eq.temperature.values(), g.dx(), &mut d_t);
        for i in 1..n {
            let state = NodeState {
                eps_s: eq.eps_s,
                eps_l: eq.eps_l.values()[i],
                temperature: eq.temperature.values()[i],
            };
            let r_l = p.u0 * d_l[i] + drying_rate(state, &p);
            let r_t = p.u0 * d_t[i] - energy_rhs(state, qdot, &p).unwrap();
            assert!(r_l.abs() < 1e-10, "moisture residual {r_l} at node {i}");
            assert!(r_t.abs() < 1e-9, "temperature residual {r_t} at node {i}");
        }
        // And it stays close to the continuum profile.
        let cont = solve_equilibrium(&p, &g).unwrap();
        let rel = (eq.outlet_temperature() - cont.outlet_temperature()).abs()
            / cont.outlet_temperature().abs();
        assert!(rel < 1e-3, "discrete vs continuum outlet temperature {rel}");
    }
}
