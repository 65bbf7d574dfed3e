//! Three-equation disk-drier model: solid density eps_s, liquid density
//! eps_l and product temperature T, advected at constant speed u0 with a
//! falling-rate drying closure and a uniform heat source,
//!
//!   d eps_s/dt + u0 d eps_s/dx = 0
//!   d eps_l/dt + u0 d eps_l/dx = -mdot,      mdot = k_f (eps_l - X_* eps_s)
//!   d T/dt     + u0 d T/dx     = H,          H = (qdot - mdot [h_l - c_pl (T - T_ref)]) / (c_ps eps_s + c_pl eps_l)
//!
//! Internal time unit is minutes; power-like inputs stay in SI watts and the
//! single W -> J/min conversion lives in the energy closure.

mod closure;
mod equilibrium;
mod forward;
mod trajectory;

pub use closure::{drying_rate, energy_rhs, heat_source_density, NodeState};
pub use equilibrium::{
    discrete_equilibrium, equilibrium_moisture, peclet_number, solve_equilibrium,
    EquilibriumProfile,
};
pub use forward::{solve_forward_nonlinear, InletSeries};
pub use trajectory::{
    read_trajectory_dump, read_trajectory_dump_file, write_trajectory_csv, write_trajectory_dump,
    write_trajectory_dump_file, DrierTrajectory,
};

use crate::error::{ModelError, Result};
use crate::field::ScalarField;

/// Seconds per minute: converts q̇ [W/m^3] to the J/(m^3 min) used internally.
pub(crate) const SECONDS_PER_MINUTE: f64 = 60.0;

/// Physical parameters of the drier model. Velocities are m/min, rates 1/min,
/// specific heats J/(kg K), latent heat J/kg, power W, conductivity W/(m K).
#[derive(Debug, Clone, PartialEq)]
pub struct DrierParams {
    /// Transport velocity [m/min].
    pub u0: f64,
    /// Drier length [m].
    pub length: f64,
    /// Falling-rate drying coefficient [1/min].
    pub k_f: f64,
    /// Equilibrium moisture content (dry-solid basis), dimensionless.
    pub x_star: f64,
    /// Specific heat of the dry solid [J/(kg K)].
    pub c_ps: f64,
    /// Specific heat of the liquid [J/(kg K)]. The model source also calls
    /// this c_pw; liquid and water subscripts are aliases here.
    pub c_pl: f64,
    /// Latent heat of evaporation [J/kg].
    pub h_l: f64,
    /// Reference temperature of the internal-energy closure [deg C].
    pub t_ref: f64,
    /// Total heating power [W].
    pub power: f64,
    /// Cross-sectional area [m^2].
    pub a_cross: f64,
    /// Inlet solid density [kg/m^3].
    pub eps_s_inlet: f64,
    /// Inlet liquid density [kg/m^3].
    pub eps_l_inlet: f64,
    /// Inlet temperature [deg C].
    pub t_inlet: f64,
    /// Thermal conductivity for the Peclet diagnostic [W/(m K)].
    pub k_cond: f64,
    /// Clamp negative drying rates (condensation) to zero. Off by default:
    /// the Lewis closure is linear and the linearization assumes
    /// differentiability.
    pub clamp_condensation: bool,
}

impl DrierParams {
    /// Derive the inlet densities from a mass feed rate and wet-basis water
    /// fraction: Phi = mu_dot/A, rho_bar = Phi/u0, eps_i = x_i rho_bar.
    #[allow(clippy::too_many_arguments)]
    pub fn from_inlet_feed(
        mu_dot_inlet: f64,
        x_w_inlet: f64,
        u0: f64,
        length: f64,
        k_f: f64,
        x_star: f64,
        c_ps: f64,
        c_pl: f64,
        h_l: f64,
        t_ref: f64,
        power: f64,
        a_cross: f64,
        t_inlet: f64,
        k_cond: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&x_w_inlet) {
            return Err(ModelError::InvalidParameter(format!(
                "wet-basis water fraction must lie in [0, 1], got {x_w_inlet}"
            )));
        }
        let phi = mu_dot_inlet / a_cross;
        let rho_bar = phi / u0;
        let params = Self {
            u0,
            length,
            k_f,
            x_star,
            c_ps,
            c_pl,
            h_l,
            t_ref,
            power,
            a_cross,
            eps_s_inlet: (1.0 - x_w_inlet) * rho_bar,
            eps_l_inlet: x_w_inlet * rho_bar,
            t_inlet,
            k_cond,
            clamp_condensation: false,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("u0", self.u0),
            ("length", self.length),
            ("k_f", self.k_f),
            ("c_ps", self.c_ps),
            ("c_pl", self.c_pl),
            ("h_l", self.h_l),
            ("a_cross", self.a_cross),
            ("eps_s_inlet", self.eps_s_inlet),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(ModelError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.x_star < 0.0 || self.eps_l_inlet < 0.0 || self.power < 0.0 {
            return Err(ModelError::InvalidParameter(
                "x_star, eps_l_inlet and power must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Residence time length/u0 [min].
    pub fn residence_time(&self) -> f64 {
        self.length / self.u0
    }

    /// Inlet volumetric heat capacity c_ps eps_s + c_pl eps_l [J/(m^3 K)].
    pub fn inlet_heat_capacity(&self) -> f64 {
        self.c_ps * self.eps_s_inlet + self.c_pl * self.eps_l_inlet
    }
}

/// The model state as three spatial fields on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DrierState {
    pub eps_s: ScalarField,
    pub eps_l: ScalarField,
    pub temperature: ScalarField,
}

impl DrierState {
    /// Moisture content X = eps_l/eps_s on the dry-solid basis.
    pub fn moisture_content(&self) -> Result<ScalarField> {
        let grid = *self.eps_s.grid();
        let mut values = Vec::with_capacity(grid.n_nodes());
        for (s, l) in self.eps_s.values().iter().zip(self.eps_l.values()) {
            if !(*s > 0.0) {
                return Err(ModelError::SingularState(format!(
                    "eps_s = {s} must be positive for moisture content"
                )));
            }
            values.push(l / s);
        }
        ScalarField::new(grid, values)
    }
}

#[cfg(test)]
pub(crate) fn disk_drier_params() -> DrierParams {
    DrierParams::from_inlet_feed(
        10.0,                        // mu_dot [kg/min]
        0.15,                        // x_w
        1.0 / 3.0,                   // u0 [m/min]
        10.0,                        // length [m]
        0.2,                         // k_f [1/min]
        0.1,                         // X_*
        1980.4,                      // c_ps
        4181.5,                      // c_pl
        2.25e6,                      // h_l
        0.0,                         // T_ref
        4.0e4,                       // P [W]
        std::f64::consts::PI * 0.25, // A = pi (0.5 m)^2
        80.0,                        // inlet T [C]
        0.6,                         // conductivity
    )
    .unwrap()
}
