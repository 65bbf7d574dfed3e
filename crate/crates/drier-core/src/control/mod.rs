//! Cost functionals, adjoint solvers and the Barzilai-Borwein descent loop.

mod adjoint_drier;
mod adjoint_simple;
mod bb;
mod problems;

pub use adjoint_drier::{
    adjoint_gradient_drier, gradient_drier, solve_adjoint_drier, AdjointDrierTrajectory,
    AdjointSlice, EtaSource, JacobianSource, NodeJacobian,
};
pub use adjoint_simple::{
    adjoint_gradient_simple, gradient_simple, solve_adjoint_simple, AdjointSimpleTrajectory,
};
pub use bb::{
    bb_descent, bb_descent_nonneg, bb_minimize, BbOptions, ControlProblem, DescentOutcome,
    StopReason,
};
pub use problems::{
    default_cost_tolerance, linear_tracking_problem, nonlinear_tracking_problem,
    simple_tracking_problem,
};


use crate::field::TimeSeries;
use crate::grid::SpaceTimeGrid;
use crate::quadrature::trapezoid;

/// What physical quantity a control signal represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlKind {
    /// Surroundings temperature q(t) of the one-equation model [deg C].
    SurroundingsTemperature,
    /// Heat-density perturbation about the operating point [W/m^3].
    HeatDensityPerturbation,
    /// Absolute heat density [W/m^3].
    HeatDensity,
    /// Square-root parametrization theta(t); the acting control is theta^2/2.
    SquaredParametrization,
}

/// A control signal sampled on the time grid, tagged with its meaning.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSignal {
    pub values: TimeSeries,
    pub kind: ControlKind,
}

impl ControlSignal {
    pub fn new(values: TimeSeries, kind: ControlKind) -> Self {
        Self { values, kind }
    }

    /// The control that actually enters the model. For the squared
    /// parametrization this is theta^2/2, nonnegative by construction.
    pub fn induced(&self) -> TimeSeries {
        match self.kind {
            ControlKind::SquaredParametrization => {
                let mut v = self.values.clone();
                for x in v.values_mut() {
                    *x = 0.5 * *x * *x;
                }
                v
            }
            _ => self.values.clone(),
        }
    }
}

/// Tracking penalty (1/2) * integral_0^tau [y(t) - y_star]^2 dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostFunctional {
    pub target: f64,
}

impl CostFunctional {
    pub fn new(target: f64) -> Self {
        Self { target }
    }

    pub fn evaluate(&self, outlet: &TimeSeries) -> f64 {
        cost(outlet, self.target)
    }
}

/// (1/2) * integral of the squared outlet mismatch, trapezoidal in time.
pub fn cost(outlet: &TimeSeries, target: f64) -> f64 {
    let sq: Vec<f64> = outlet.values().iter().map(|v| (v - target) * (v - target)).collect();
    0.5 * trapezoid(&sq, outlet.grid().dt())
}

/// Per-iteration convergence record of a descent run.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentRecord {
    pub iteration: usize,
    pub cost: f64,
    pub step: f64,
    pub grad_norm: f64,
    pub wall_ms: f64,
}

/// The convergence artifact of a descent run: one record per iteration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DescentTrace {
    pub records: Vec<DescentRecord>,
}

impl DescentTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn initial_cost(&self) -> Option<f64> {
        self.records.first().map(|r| r.cost)
    }

    pub fn final_cost(&self) -> Option<f64> {
        self.records.last().map(|r| r.cost)
    }

    /// True when some iteration increased the cost (the Barzilai-Borwein
    /// method is not monotone).
    pub fn has_spikes(&self) -> bool {
        self.records.windows(2).any(|w| w[1].cost > w[0].cost)
    }

    /// Write the trace as CSV: iter, cost, alpha, grad_norm, wall_ms.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,cost,alpha,grad_norm,wall_ms\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.3}\n",
                r.iteration, r.cost, r.step, r.grad_norm, r.wall_ms
            ));
        }
        out
    }
}

/// Mismatch series y(t) - target, the adjoint outlet boundary data.
pub(crate) fn mismatch_series(outlet: &TimeSeries, target: f64) -> Vec<f64> {
    outlet.values().iter().map(|v| v - target).collect()
}

/// Trapezoid weights of the cost's time integral: dt/2 at the ends, dt inside.
pub(crate) fn cost_time_weights(grid: &SpaceTimeGrid) -> Vec<f64> {
    let dt = grid.dt();
    let mut w = vec![dt; grid.n_samples()];
    w[0] = 0.5 * dt;
    let last = grid.n_steps();
    w[last] = 0.5 * dt;
    w
}
#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n_steps: usize, horizon: f64) -> SpaceTimeGrid {
        SpaceTimeGrid::new(5.0, 10, horizon, n_steps).unwrap()
    }

    #[test]
    fn cost_of_exact_tracking_is_zero() {
        let g = grid(100, 2.0);
        let outlet = TimeSeries::constant(g, 100.0);
        assert_eq!(cost(&outlet, 100.0), 0.0);
    }

    #[test]
    fn cost_of_unit_offset_over_two_is_one() {
        let g = grid(100, 2.0);
        let outlet = TimeSeries::constant(g, 101.0);
        assert!((cost(&outlet, 100.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cost_of_sine_over_period_is_quarter() {
        let g = grid(100, 1.0);
        let outlet = TimeSeries::from_fn(g, |t| 100.0 + (2.0 * PI * t).sin());
        assert!((cost(&outlet, 100.0) - 0.25).abs() < 1e-6);
    }

    #[test]
    fn squared_parametrization_is_nonnegative() {
        let g = grid(50, 1.0);
        let theta = TimeSeries::from_fn(g, |t| (7.0 * t).sin() - 0.4);
        let c = ControlSignal::new(theta.clone(), ControlKind::SquaredParametrization);
        for (q, th) in c.induced().values().iter().zip(theta.values()) {
            assert!(*q >= 0.0);
            assert!((q - 0.5 * th * th).abs() < 1e-15);
        }
    }
}
