//! Pointwise closures: falling-rate drying, uniform heating, energy balance.

use crate::drier::{DrierParams, SECONDS_PER_MINUTE};
use crate::error::{ModelError, Result};

/// State of one grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    pub eps_s: f64,
    pub eps_l: f64,
    pub temperature: f64,
}

/// Falling-rate (Lewis) drying rate mdot = k_f (eps_l - X_* eps_s)
/// [kg/(m^3 min)]. Negative values (re-humidification) are permitted unless
/// the params clamp them.
pub fn drying_rate(state: NodeState, params: &DrierParams) -> f64 {
    let mdot = params.k_f * (state.eps_l - params.x_star * state.eps_s);
    if params.clamp_condensation && mdot < 0.0 {
        0.0
    } else {
        mdot
    }
}

/// Uniform heat-source density qdot = P / (A_cross * length) [W/m^3].
pub fn heat_source_density(params: &DrierParams) -> f64 {
    params.power / (params.a_cross * params.length)
}

/// Temperature rate
/// H = (qdot - mdot [h_l - c_pl (T - T_ref)]) / (c_ps eps_s + c_pl eps_l),
/// reconciled to the internal minute unit: `qdot_w` is in W/m^3 and the
/// result in K/min.
pub fn energy_rhs(state: NodeState, qdot_w: f64, params: &DrierParams) -> Result<f64> {
    let capacity = params.c_ps * state.eps_s + params.c_pl * state.eps_l;
    if !(capacity > 0.0) {
        return Err(ModelError::SingularState(format!(
            "volumetric heat capacity {capacity} must be positive (eps_s = {}, eps_l = {})",
            state.eps_s, state.eps_l
        )));
    }
    let mdot = drying_rate(state, params);
    let evaporative_load = mdot * (params.h_l - params.c_pl * (state.temperature - params.t_ref));
    Ok((SECONDS_PER_MINUTE * qdot_w - evaporative_load) / capacity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drier::disk_drier_params;

    #[test]
    fn drying_rate_vanishes_at_equilibrium_moisture() {
        let p = disk_drier_params();
        let state = NodeState { eps_s: 30.0, eps_l: 0.1 * 30.0, temperature: 80.0 };
        assert_eq!(drying_rate(state, &p), 0.0);
    }

    #[test]
    fn drying_rate_at_inlet_state() {
        // Derived chain: rho_bar = 38.197, eps_s = 32.468, eps_l = 5.730,
        // mdot = 0.2 (5.730 - 3.247) = 0.4966 kg/(m^3 min).
        let p = disk_drier_params();
        let state = NodeState { eps_s: p.eps_s_inlet, eps_l: p.eps_l_inlet, temperature: 80.0 };
        let mdot = drying_rate(state, &p);
        let expected = 0.2 * (p.eps_l_inlet - 0.1 * p.eps_s_inlet);
        assert!((mdot - expected).abs() < 1e-14);
        assert!((mdot - 0.496_563).abs() < 1e-4, "mdot = {mdot}");
    }

    #[test]
    fn drying_rate_is_linear_in_k_f() {
        let p = disk_drier_params();
        let doubled = DrierParams { k_f: 2.0 * p.k_f, ..p.clone() };
        let state = NodeState { eps_s: 20.0, eps_l: 4.0, temperature: 60.0 };
        assert!((drying_rate(state, &doubled) - 2.0 * drying_rate(state, &p)).abs() < 1e-14);
    }

    #[test]
    fn clamp_suppresses_condensation() {
        let p = disk_drier_params();
        let clamped = DrierParams { clamp_condensation: true, ..p.clone() };
        let dry = NodeState { eps_s: 30.0, eps_l: 1.0, temperature: 80.0 }; // eps_l < X_* eps_s
        assert!(drying_rate(dry, &p) < 0.0);
        assert_eq!(drying_rate(dry, &clamped), 0.0);
    }

    #[test]
    fn heat_source_density_reference_drier() {
        let p = disk_drier_params();
        let q = heat_source_density(&p);
        assert!((q - 5092.958).abs() < 0.01, "qdot = {q}");
        // linear in P; zero power means zero source
        let twice = DrierParams { power: 2.0 * p.power, ..p.clone() };
        assert!((heat_source_density(&twice) - 2.0 * q).abs() < 1e-9);
        let off = DrierParams { power: 0.0, ..p };
        assert_eq!(heat_source_density(&off), 0.0);
    }

    #[test]
    fn energy_rhs_pure_heating_and_zero_cases() {
        let p = disk_drier_params();
        let at_eq = NodeState { eps_s: 30.0, eps_l: 3.0, temperature: 80.0 }; // mdot = 0
        // no source, no evaporation -> no heating
        assert_eq!(energy_rhs(at_eq, 0.0, &p).unwrap(), 0.0);
        // pure heating: H = 60 qdot / capacity (K/min from W/m^3)
        let qdot = heat_source_density(&p);
        let capacity = p.c_ps * 30.0 + p.c_pl * 3.0;
        let h = energy_rhs(at_eq, qdot, &p).unwrap();
        assert!((h - 60.0 * qdot / capacity).abs() < 1e-12);
    }

    #[test]
    fn energy_rhs_against_independent_arithmetic() {
        // Independent evaluation of the full formula at the reference inlet
        // state with T = 80 C, T_ref = 0 C.
        let p = disk_drier_params();
        let state = NodeState { eps_s: p.eps_s_inlet, eps_l: p.eps_l_inlet, temperature: 80.0 };
        let qdot = heat_source_density(&p);
        let h = energy_rhs(state, qdot, &p).unwrap();

        let mdot = 0.2 * (5.729_577_95 - 0.1 * 32.467_608_39);
        let lam = 2.25e6 - 4181.5 * 80.0;
        let cap = 1980.4 * 32.467_608_39 + 4181.5 * 5.729_577_95;
        let oracle = (60.0 * 5092.9582 - mdot * lam) / cap;
        assert!((h - oracle).abs() < 1e-6 * oracle.abs(), "H = {h}, oracle = {oracle}");
    }

    #[test]
    fn vanishing_capacity_is_singular() {
        let p = disk_drier_params();
        let state = NodeState { eps_s: 0.0, eps_l: 0.0, temperature: 10.0 };
        assert!(matches!(energy_rhs(state, 100.0, &p), Err(ModelError::SingularState(_))));
    }
}
