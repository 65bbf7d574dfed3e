//! Scenario implementations behind the [`crate::registry::Scenario`] trait.

pub mod drier_equilibrium;
pub mod drier_linear_control;
pub mod drier_nonlinear_control;
pub mod simple_control;
pub mod simple_validate;
pub mod spectrum;

use crate::config::{OptimizerConfig, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::registry::RunOptions;
use drier_core::control::BbOptions;
use drier_core::TimeSeries;

/// Root-mean-square of a sample window.
pub(crate) fn rms(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt()
}

/// Samples of the trailing evaluation window: the final hour, or the final
/// half of the horizon when the run is shorter than two hours.
pub(crate) fn final_window(series: &TimeSeries) -> &[f64] {
    let grid = series.grid();
    let window_min = (grid.horizon() / 2.0).min(60.0);
    let start = ((grid.horizon() - window_min) / grid.dt()).round() as usize;
    &series.values()[start.min(grid.n_steps())..]
}

/// Assemble descent options from the optimizer block plus CLI overrides.
pub(crate) fn bb_options(
    optimizer: &OptimizerConfig,
    default_tol_cost: f64,
    opts: &RunOptions,
) -> BbOptions {
    BbOptions {
        max_iters: opts.max_iters.unwrap_or(optimizer.max_iters),
        tol_cost: optimizer.tol_cost.unwrap_or(default_tol_cost),
        tol_grad_rel: optimizer.tol_grad_rel,
        first_step_scale: optimizer.first_step_scale,
    }
}

/// The forcing block, required by the control scenarios.
pub(crate) fn require_forcing(config: &ScenarioConfig) -> Result<&crate::config::ForcingConfig> {
    config
        .forcing
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("[forcing] block required for kind '{}'", config.kind)))
}

/// Times of the grid samples in minutes, for CSV columns.
pub(crate) fn time_column(grid: &drier_core::SpaceTimeGrid) -> Vec<f64> {
    (0..grid.n_samples()).map(|n| grid.t(n)).collect()
}

/// Node positions in metres, for CSV columns.
pub(crate) fn space_column(grid: &drier_core::SpaceTimeGrid) -> Vec<f64> {
    (0..grid.n_nodes()).map(|i| grid.x(i)).collect()
}
