//! Barzilai-Borwein steepest descent.
//!
//! Minimizes J via x_{k+1} = x_k - alpha_k G(x_k), where G is the gradient in
//! a weighted discrete L2 space and the step comes from the least-squares
//! secant fit of the Hessian by a scalar multiple of the identity:
//!
//!   alpha_k = <d_k, d_k> / <d_k, g_k>,  d_k = x_k - x_{k-1},  g_k = G_k - G_{k-1}.
//!
//! The first step has no secant pair and uses a small configured step scaled
//! by the control and gradient magnitudes. The method is not monotone; the
//! trace records every iterate and the best one seen is returned.

use crate::control::{DescentRecord, DescentTrace};
use crate::error::{ModelError, Result};
use crate::field::TimeSeries;
use crate::grid::SpaceTimeGrid;
use crate::quadrature::control_norm;
use std::time::Instant;

/// Tuning knobs of the descent loop.
#[derive(Debug, Clone, Copy)]
pub struct BbOptions {
    pub max_iters: usize,
    /// Stop when J falls below this absolute value.
    pub tol_cost: f64,
    /// Stop when the gradient norm falls below tol_grad_rel times its initial value.
    pub tol_grad_rel: f64,
    /// Dimensionless scale of the first step: lambda0 = first_step_scale * |x0| / |G0|.
    pub first_step_scale: f64,
}

impl BbOptions {
    /// Defaults used across scenarios: tol_cost = 1e-10 * target^2 * tau must be
    /// set by the caller; this constructor takes it directly.
    pub fn new(max_iters: usize, tol_cost: f64) -> Self {
        Self { max_iters, tol_cost, tol_grad_rel: 1e-8, first_step_scale: 1e-3 }
    }
}

/// Why the loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    CostTolerance,
    GradientTolerance,
    MaxIterations,
    /// The initial gradient was exactly zero: the starting point is stationary.
    AlreadyStationary,
}

/// Result of a descent run over raw sample vectors.
#[derive(Debug, Clone)]
pub struct DescentOutcome {
    /// Best iterate seen (by cost).
    pub solution: Vec<f64>,
    pub best_cost: f64,
    pub trace: DescentTrace,
    pub stop: StopReason,
    /// True when a degenerate secant denominator forced a fixed fallback step.
    pub fallback_steps: usize,
}

/// Minimize a smooth functional over sample vectors with the BB(1) step.
///
/// `evaluate` must return the cost and the gradient with respect to the
/// weighted inner product with uniform weight `weight` per sample (for control
/// signals on a time grid this is dt).
pub fn bb_minimize(
    mut evaluate: impl FnMut(&[f64]) -> Result<(f64, Vec<f64>)>,
    x0: Vec<f64>,
    weight: f64,
    opts: &BbOptions,
) -> Result<DescentOutcome> {
    if opts.max_iters < 1 {
        return Err(ModelError::InvalidParameter("max_iters must be at least 1".into()));
    }
    let started = Instant::now();
    let mut trace = DescentTrace::default();
    let mut fallback_steps = 0usize;

    let mut x = x0;
    let (mut cost, mut grad) = evaluate(&x)?;
    if !cost.is_finite() {
        return Err(ModelError::Diverged { step: 0, context: "non-finite initial cost".into() });
    }
    let grad0_norm = control_norm(&grad, weight);
    let mut grad_norm = grad0_norm;
    trace.records.push(DescentRecord {
        iteration: 0,
        cost,
        step: 0.0,
        grad_norm,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    });

    let mut best = x.clone();
    let mut best_cost = cost;

    if grad0_norm == 0.0 {
        return Ok(DescentOutcome {
            solution: best,
            best_cost,
            trace,
            stop: StopReason::AlreadyStationary,
            fallback_steps,
        });
    }

    // First step: no secant pair yet, use the configured small step scaled by
    // the control magnitude (or the unit-control norm when starting from zero).
    let x_scale = {
        let n = control_norm(&x, weight);
        if n > 1e-12 { n } else { (weight * x.len() as f64).sqrt() }
    };
    let lambda0 = opts.first_step_scale * x_scale / grad0_norm;

    let mut prev_x: Vec<f64>;
    let mut prev_grad: Vec<f64>;
    let mut alpha = lambda0;
    let mut stop = StopReason::MaxIterations;

    for iter in 1..=opts.max_iters {
        prev_x = x.clone();
        prev_grad = grad.clone();
        for (xi, gi) in x.iter_mut().zip(&prev_grad) {
            *xi -= alpha * gi;
        }
        let (c, g) = evaluate(&x)?;
        if !c.is_finite() {
            return Err(ModelError::Diverged {
                step: iter,
                context: format!("non-finite cost at descent iteration {iter}"),
            });
        }
        cost = c;
        grad = g;
        grad_norm = control_norm(&grad, weight);
        trace.records.push(DescentRecord {
            iteration: iter,
            cost,
            step: alpha,
            grad_norm,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        if cost < best_cost {
            best_cost = cost;
            best.copy_from_slice(&x);
        }
        if cost <= opts.tol_cost {
            stop = StopReason::CostTolerance;
            break;
        }
        if grad_norm <= opts.tol_grad_rel * grad0_norm {
            stop = StopReason::GradientTolerance;
            break;
        }

        // Secant step for the next iteration.
        let mut dd = 0.0;
        let mut dg = 0.0;
        for ((xi, pxi), (gi, pgi)) in x.iter().zip(&prev_x).zip(grad.iter().zip(&prev_grad)) {
            let d = xi - pxi;
            dd += d * d;
            dg += d * (gi - pgi);
        }
        dd *= weight;
        dg *= weight;
        if dg.abs() <= f64::MIN_POSITIVE.max(1e-300) || !dg.is_finite() {
            // Degenerate secant denominator: fall back to the fixed first step.
            alpha = lambda0;
            fallback_steps += 1;
        } else {
            alpha = dd / dg;
            if !(alpha > 0.0) {
                // Negative curvature along the secant; keep moving with the
                // magnitude but never reverse into an ascent step.
                alpha = alpha.abs().max(f64::MIN_POSITIVE);
                fallback_steps += 1;
            }
        }
    }

    Ok(DescentOutcome { solution: best, best_cost, trace, stop, fallback_steps })
}

/// A forward/adjoint/cost pipeline viewed as a differentiable functional of
/// the control samples. `evaluate` returns the cost and the *descent
/// direction* d(t) (the negative gradient), matching the adjoint solvers.
pub struct ControlProblem<'a> {
    #[allow(clippy::type_complexity)]
    pub evaluate: Box<dyn FnMut(&TimeSeries) -> Result<(f64, TimeSeries)> + 'a>,
    pub grid: SpaceTimeGrid,
}

/// BB descent over a control signal. Wraps [`bb_minimize`] with the uniform-dt
/// control metric; `problem.evaluate` yields (cost, descent direction).
pub fn bb_descent(
    problem: &mut ControlProblem<'_>,
    q0: &TimeSeries,
    opts: &BbOptions,
) -> Result<(TimeSeries, DescentTrace, DescentOutcome)> {
    let grid = problem.grid;
    q0.require_same_grid(&grid, "initial control")?;
    let dt = grid.dt();
    let eval = &mut problem.evaluate;
    let outcome = bb_minimize(
        |x| {
            let q = TimeSeries::new(grid, x.to_vec())?;
            let (cost, direction) = eval(&q)?;
            // gradient = -direction
            let g = direction.values().iter().map(|d| -d).collect();
            Ok((cost, g))
        },
        q0.values().to_vec(),
        dt,
        opts,
    )?;
    let control = TimeSeries::new(grid, outcome.solution.clone())?;
    Ok((control, outcome.trace.clone(), outcome))
}

/// Nonnegativity-constrained descent through the parametrization
/// q(t) = theta(t)^2 / 2. The chain rule turns the descent direction d_q into
/// d_theta(t) = theta(t) * d_q(t); the returned control is pointwise >= 0.
pub fn bb_descent_nonneg(
    problem: &mut ControlProblem<'_>,
    theta0: &TimeSeries,
    opts: &BbOptions,
) -> Result<(TimeSeries, DescentTrace, DescentOutcome)> {
    let grid = problem.grid;
    theta0.require_same_grid(&grid, "initial parametrization")?;
    let dt = grid.dt();
    let eval = &mut problem.evaluate;
    let outcome = bb_minimize(
        |theta| {
            let q: Vec<f64> = theta.iter().map(|th| 0.5 * th * th).collect();
            let (cost, direction) = eval(&TimeSeries::new(grid, q)?)?;
            let g = direction
                .values()
                .iter()
                .zip(theta)
                .map(|(d, th)| -d * th)
                .collect();
            Ok((cost, g))
        },
        theta0.values().to_vec(),
        dt,
        opts,
    )?;
    let q: Vec<f64> = outcome.solution.iter().map(|th| 0.5 * th * th).collect();
    let control = TimeSeries::new(grid, q)?;
    Ok((control, outcome.trace.clone(), outcome))
}
