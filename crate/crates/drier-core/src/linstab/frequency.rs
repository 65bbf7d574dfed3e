//! Frequency-domain control of the linearized system.
//!
//! With constant k_f and X_*, the density perturbations have explicit
//! harmonic solutions, and suppressing the outlet temperature fluctuation at
//! angular frequency omega takes the complex control amplitude
//!
//!   dqhat = [ -dThat(0) - I_rho ] / I_eta,
//!   I_rho = integral_0^l (rho/u0) e^{i omega x/u0 - lambda_+(x)/u0} dx,
//!   I_eta = integral_0^l (eta/u0) e^{i omega x/u0 - lambda_+(x)/u0} dx,
//!
//! where rho(x) = dH/d eps_s * dehat_s(x) + dH/d eps_l * dehat_l(x) collects
//! the density forcing of the temperature row.

use crate::drier::{DrierParams, EquilibriumProfile};
use crate::error::{ModelError, Result};
use crate::linstab::jacobian::{jacobian_profile, positive_eigenvalue_integral};
use crate::linstab::solver::eta_profile;
use num_complex::Complex64;

/// Complex amplitudes of the inlet perturbations at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InletAmplitudes {
    pub d_eps_s: Complex64,
    pub d_eps_l: Complex64,
    pub d_temperature: Complex64,
}

impl InletAmplitudes {
    pub fn zero() -> Self {
        Self { d_eps_s: Complex64::ZERO, d_eps_l: Complex64::ZERO, d_temperature: Complex64::ZERO }
    }

    /// Amplitude of a pure a*sin(omega t) temperature forcing in the
    /// e^{i omega t} convention: -i a.
    pub fn temperature_sine(amplitude: f64) -> Self {
        Self { d_temperature: Complex64::new(0.0, -amplitude), ..Self::zero() }
    }
}

struct FrequencyKernel {
    /// e^{i omega x/u0 - lambda_+(x)/u0} per node.
    phase: Vec<Complex64>,
    /// rho(x)/u0 per node.
    rho_over_u0: Vec<Complex64>,
    /// eta(x)/u0 per node.
    eta_over_u0: Vec<f64>,
    dx: f64,
}

fn build_kernel(
    equilibrium: &EquilibriumProfile,
    params: &DrierParams,
    omega_rad_per_min: f64,
    inlet: &InletAmplitudes,
) -> Result<FrequencyKernel> {
    let grid = equilibrium.eps_l.grid();
    let u0 = params.u0;
    let jacs = jacobian_profile(equilibrium, params)?;
    let lambda = positive_eigenvalue_integral(equilibrium, params);
    let eta = eta_profile(equilibrium, params);

    let n = grid.n_nodes();
    let mut phase = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    let mut eta_over_u0 = Vec::with_capacity(n);
    for i in 0..n {
        let x = grid.x(i);
        let arg = Complex64::new(-lambda[i] / u0, omega_rad_per_min * x / u0);
        phase.push(arg.exp());

        // Explicit density solutions of the harmonic problem.
        let travel = Complex64::new(0.0, -omega_rad_per_min * x / u0).exp();
        let decay = (-params.k_f * x / u0).exp();
        let de_s = inlet.d_eps_s * travel;
        let de_l = inlet.d_eps_l * travel * decay
            + params.x_star * inlet.d_eps_s * travel * (1.0 - decay);
        let j = &jacs[i];
        rho.push((j[2][0] * de_s + j[2][1] * de_l) / u0);
        eta_over_u0.push(eta[i] / u0);
    }
    Ok(FrequencyKernel { phase, rho_over_u0: rho, eta_over_u0, dx: grid.dx() })
}

fn complex_trapezoid(values: impl ExactSizeIterator<Item = Complex64>, dx: f64) -> Complex64 {
    let n = values.len();
    let mut acc = Complex64::ZERO;
    for (i, v) in values.enumerate() {
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        acc += w * v;
    }
    acc * dx
}

/// Complex control amplitude suppressing the outlet temperature fluctuation
/// at `omega_rad_per_min`. Returns the W/m^3 amplitude in the e^{i omega t}
/// convention; errors out when the denominator quadrature vanishes.
pub fn frequency_domain_control(
    equilibrium: &EquilibriumProfile,
    params: &DrierParams,
    omega_rad_per_min: f64,
    inlet: &InletAmplitudes,
) -> Result<Complex64> {
    let kernel = build_kernel(equilibrium, params, omega_rad_per_min, inlet)?;
    let i_rho = complex_trapezoid(
        kernel.rho_over_u0.iter().zip(&kernel.phase).map(|(r, p)| r * p),
        kernel.dx,
    );
    let i_eta = complex_trapezoid(
        kernel.eta_over_u0.iter().zip(&kernel.phase).map(|(e, p)| e * p),
        kernel.dx,
    );
    let scale: f64 = kernel.eta_over_u0.iter().sum::<f64>() * kernel.dx;
    if i_eta.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(ModelError::NoControl(format!(
            "forcing-response quadrature vanished at omega = {omega_rad_per_min} rad/min"
        )));
    }
    Ok((-inlet.d_temperature - i_rho) / i_eta)
}

/// Steady harmonic outlet response dThat(l) for a given control amplitude;
/// zero (to quadrature consistency) when the control comes from
/// [`frequency_domain_control`].
pub fn transfer_outlet_response(
    equilibrium: &EquilibriumProfile,
    params: &DrierParams,
    omega_rad_per_min: f64,
    inlet: &InletAmplitudes,
    dqdot: Complex64,
) -> Result<Complex64> {
    let kernel = build_kernel(equilibrium, params, omega_rad_per_min, inlet)?;
    let i_rho = complex_trapezoid(
        kernel.rho_over_u0.iter().zip(&kernel.phase).map(|(r, p)| r * p),
        kernel.dx,
    );
    let i_eta = complex_trapezoid(
        kernel.eta_over_u0.iter().zip(&kernel.phase).map(|(e, p)| e * p),
        kernel.dx,
    );
    let grid = equilibrium.eps_l.grid();
    let u0 = params.u0;
    let lambda = positive_eigenvalue_integral(equilibrium, params);
    let envelope = Complex64::new(
        lambda[grid.n_cells()] / u0,
        -omega_rad_per_min * grid.length() / u0,
    )
    .exp();
    Ok(envelope * (inlet.d_temperature + i_rho + dqdot * i_eta))
}
