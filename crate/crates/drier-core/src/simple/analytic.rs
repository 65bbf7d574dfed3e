//! Closed-form solution and closed-form optimal control of the one-equation
//! model.
//!
//! The solution splits along the characteristic x = u0 t:
//!
//!   T(x,t) = T_init(x - u0 t) e^{-kt} + I(t)                          (u0 t < x)
//!   T(x,t) = [T_inlet(t - x/u0) - I(t - x/u0)] e^{-k x/u0} + I(t)     (u0 t > x)
//!
//! where I(t) = e^{-kt} * integral_0^t e^{kt'} k q(t') dt' is the relaxation
//! response to the surroundings temperature q.

use crate::error::{ModelError, Result};
use crate::field::TimeSeries;
use crate::grid::SpaceTimeGrid;
use crate::signal::Signal;
use crate::simple::SimpleModelParams;

/// Precomputed evaluator for I(t) on a control's time grid.
///
/// The cumulative sums are built with the algebraically equivalent recurrence
///   I_{n+1} = e^{-k dt} (I_n + (dt/2) k q_n) + (dt/2) k q_{n+1},
/// which is the trapezoidal rule for the stated integrand written in a form
/// that never evaluates e^{+kt}.
#[derive(Debug, Clone)]
pub struct RelaxationIntegral {
    k: f64,
    dt: f64,
    horizon: f64,
    q: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RelaxationIntegral {
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < -1e-12 * self.horizon.max(1.0) || t > self.horizon * (1.0 + 1e-12) {
            return Err(ModelError::Domain(format!(
                "I(t) requested at t = {t}, control defined on [0, {}]",
                self.horizon
            )));
        }
        let t = t.clamp(0.0, self.horizon);
        let pos = t / self.dt;
        let m = (pos.floor() as usize).min(self.q.len() - 1);
        let delta = t - m as f64 * self.dt;
        if delta <= 0.0 || m + 1 >= self.q.len() {
            return Ok(self.cumulative[m]);
        }
        // Partial trapezoid over [t_m, t] with q linearly interpolated at t.
        let q_t = self.q[m] + (self.q[m + 1] - self.q[m]) * (delta / self.dt);
        Ok((-self.k * delta).exp() * (self.cumulative[m] + 0.5 * delta * self.k * self.q[m])
            + 0.5 * delta * self.k * q_t)
    }
}

/// Build the I(t) evaluator for a relaxation rate `k` and a sampled control.
pub fn exponential_relaxation_integral(k: f64, q: &TimeSeries) -> RelaxationIntegral {
    let grid = q.grid();
    let dt = grid.dt();
    let decay = (-k * dt).exp();
    let values = q.values();
    let mut cumulative = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    cumulative.push(0.0);
    for n in 0..values.len() - 1 {
        acc = decay * (acc + 0.5 * dt * k * values[n]) + 0.5 * dt * k * values[n + 1];
        cumulative.push(acc);
    }
    RelaxationIntegral { k, dt, horizon: grid.horizon(), q: values.to_vec(), cumulative }
}

/// Evaluate the closed-form solution at one point. On the characteristic
/// u0 t = x the inlet branch is returned.
pub fn analytic_solution(
    params: &SimpleModelParams,
    q: &TimeSeries,
    x: f64,
    t: f64,
) -> Result<f64> {
    params.validate()?;
    if x < 0.0 || x > params.length {
        return Err(ModelError::Domain(format!("x = {x} outside [0, {}]", params.length)));
    }
    if t < 0.0 {
        return Err(ModelError::Domain(format!("t = {t} is negative")));
    }
    let integral = exponential_relaxation_integral(params.k, q);
    analytic_solution_with(params, &integral, x, t)
}

/// Same as [`analytic_solution`] but reusing a prebuilt I(t) evaluator.
pub fn analytic_solution_with(
    params: &SimpleModelParams,
    integral: &RelaxationIntegral,
    x: f64,
    t: f64,
) -> Result<f64> {
    if params.u0 * t < x {
        Ok(params.t_init.value(x - params.u0 * t) * (-params.k * t).exp() + integral.eval(t)?)
    } else {
        let delay = t - x / params.u0;
        let damping = (-params.k * x / params.u0).exp();
        Ok((params.t_inlet.value(delay) - integral.eval(delay)?) * damping + integral.eval(t)?)
    }
}

/// Outlet series T(length, t_n) for every sample of the grid, with a single
/// pass over the control.
pub fn analytic_outlet_series(
    params: &SimpleModelParams,
    q: &TimeSeries,
    grid: &SpaceTimeGrid,
) -> Result<TimeSeries> {
    params.validate()?;
    q.require_same_grid(grid, "control")?;
    let integral = exponential_relaxation_integral(params.k, q);
    let mut values = Vec::with_capacity(grid.n_samples());
    for n in 0..grid.n_samples() {
        values.push(analytic_solution_with(params, &integral, params.length, grid.t(n))?);
    }
    TimeSeries::new(*grid, values)
}

/// One-sided limits of the optimal control at the characteristic time
/// t0 = length/u0, from the closed-form construction (with the free constant
/// q(0) taken as zero, valid for T_init = T_star):
///
///   q(t0-) = T_star + (u0/k) T_init'(0) e^{-k t0}
///   q(t0+) = T_star - [T_inlet(0) + (1/k) T_inlet'(0)] e^{-k t0}
pub fn optimal_control_jump_limits(params: &SimpleModelParams) -> Result<(f64, f64)> {
    require_optimal_control_case(params)?;
    let t0 = params.residence_time();
    let damping = (-params.k * t0).exp();
    let minus = params.t_star + params.u0 / params.k * params.t_init.derivative(0.0)? * damping;
    let plus = params.t_star
        - (params.t_inlet.value(0.0) + params.t_inlet.derivative(0.0)? / params.k) * damping;
    Ok((minus, plus))
}

/// Closed-form optimal control holding T(length, t) at T_star, sampled on the
/// grid's time axis.
///
/// Before the residence time the control follows the closed form driven by
/// T_init'; after it, the delay recursion
///
///   q(t) = T_star - e^{-k t0} [T_inlet(t - t0) + (1/k) T_inlet'(t - t0) - q(t - t0)]
///
/// is evaluated with the delayed value interpolated linearly between samples.
/// The sample nearest t0 from above carries the right-limit value; both
/// one-sided limits are available from [`optimal_control_jump_limits`].
pub fn analytic_optimal_control(
    params: &SimpleModelParams,
    grid: &SpaceTimeGrid,
) -> Result<TimeSeries> {
    require_optimal_control_case(params)?;
    let t0 = params.residence_time();
    let dt = grid.dt();
    if t0 < 2.0 * dt {
        return Err(ModelError::InvalidParameter(format!(
            "residence time {t0} must span at least two time steps (dt = {dt})"
        )));
    }
    let k = params.k;
    let t_star = params.t_star;
    let damping = (-k * t0).exp();
    // First sample at or above t0 (fp-tolerant).
    let jump_index = ((t0 / dt) - 1e-9).ceil() as usize;
    let (_, q_plus) = optimal_control_jump_limits(params)?;

    let mut values: Vec<f64> = Vec::with_capacity(grid.n_samples());
    for n in 0..grid.n_samples() {
        let t = grid.t(n);
        let q_n = if n < jump_index {
            // Closed form before the characteristic time.
            t_star + params.u0 / k * params.t_init.derivative(params.length - params.u0 * t)? * (-k * t).exp()
        } else if n == jump_index {
            q_plus
        } else {
            let s = t - t0;
            let delayed = interpolate_prefix(&values, dt, s);
            t_star - damping * (params.t_inlet.value(s) + params.t_inlet.derivative(s)? / k - delayed)
        };
        values.push(q_n);
    }
    TimeSeries::new(*grid, values)
}

/// The trivial control of the large-k*length/u0 washout regime: q(t) = T_star.
pub fn washout_control(params: &SimpleModelParams, grid: &SpaceTimeGrid) -> TimeSeries {
    TimeSeries::constant(*grid, params.t_star)
}

fn require_optimal_control_case(params: &SimpleModelParams) -> Result<()> {
    params.validate()?;
    match &params.t_init {
        Signal::Constant(c) if (c - params.t_star).abs() <= 1e-9 * params.t_star.abs().max(1.0) => {}
        _ => {
            return Err(ModelError::Unsupported(
                "analytic optimal control requires T_init = T_star (constant); \
                 q(0) is undetermined otherwise"
                    .into(),
            ))
        }
    }
    if !params.t_inlet.is_analytic() {
        return Err(ModelError::Unsupported(
            "analytic optimal control needs an analytic inlet family (derivative required)".into(),
        ));
    }
    Ok(())
}

/// Linear interpolation inside the already computed prefix of the control.
/// Causality of the recursion guarantees s < t_{n-1} here.
fn interpolate_prefix(values: &[f64], dt: f64, s: f64) -> f64 {
    let pos = s / dt;
    let i = (pos.floor() as usize).min(values.len() - 2);
    let frac = pos - i as f64;
    values[i] * (1.0 - frac) + values[i + 1] * frac
}
