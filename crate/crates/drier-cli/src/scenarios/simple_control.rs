//! `simple-control`: Barzilai-Borwein recovery of the optimal surroundings
//! temperature for the one-equation model, compared against the closed-form
//! optimal control.

use crate::bundle::{csv_table, ResultBundle};
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::registry::{RunOptions, Scenario};
use crate::scenarios::{bb_options, time_column};
use drier_core::control::{
    bb_descent, default_cost_tolerance, simple_tracking_problem,
};
use drier_core::simple::{
    analytic_optimal_control, optimal_control_jump_limits, solve_forward_outlet,
};
use drier_core::TimeSeries;

pub struct SimpleControl;

impl Scenario for SimpleControl {
    fn kind(&self) -> &'static str {
        "simple-control"
    }

    fn validate(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<()> {
        let mut notes = Vec::new();
        let params = config.build_simple(&opts.base_dir, &mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        grid.require_cfl(params.u0)?;
        Ok(())
    }

    fn run(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<ResultBundle> {
        let mut notes = Vec::new();
        let params = config.build_simple(&opts.base_dir, &mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        for note in &notes {
            opts.log(format!("[config] {note}"));
        }

        let q0 = TimeSeries::constant(grid, params.t_star);
        let mut problem = simple_tracking_problem(&params, grid);
        let options = bb_options(
            &config.optimizer(),
            default_cost_tolerance(params.t_star, grid.horizon()),
            opts,
        );
        let (control, trace, outcome) = bb_descent(&mut problem, &q0, &options)?;
        let residual = outcome.best_cost;
        opts.log(format!(
            "[simple-control] {} iterations, J = {residual:.3e} C^2 min (J/T*^2 = {:.3e}), stop {:?}",
            trace.len() - 1,
            residual / (params.t_star * params.t_star),
            outcome.stop
        ));

        let outlet = solve_forward_outlet(&params, &control, &grid)?;
        let mut bundle = ResultBundle::new(self.kind());
        bundle.summary.record_descent(&trace, outcome.stop);
        bundle.summary.residual = Some(residual);
        bundle.summary.normalized_final_cost = Some(residual / (params.t_star * params.t_star));
        bundle.summary.control_kind = Some("surroundings temperature".to_string());
        bundle.push_csv("trace.csv", trace.to_csv());

        // Numeric and closed-form controls side by side, ready for plotting.
        match analytic_optimal_control(&params, &grid) {
            Ok(analytic) => {
                let (minus, plus) = optimal_control_jump_limits(&params)?;
                bundle.summary.jump_minus = Some(minus);
                bundle.summary.jump_plus = Some(plus);
                // L_inf discrepancy away from the jump window and terminal sample.
                let t0 = params.residence_time();
                let mut max_err = 0.0f64;
                for n in 0..grid.n_steps() {
                    if (grid.t(n) - t0).abs() <= 0.2 {
                        continue;
                    }
                    max_err = max_err.max((control.values()[n] - analytic.values()[n]).abs());
                }
                bundle.summary.control_discrepancy_outside_window = Some(max_err);
                bundle.push_csv(
                    "control.csv",
                    csv_table(&[
                        ("t_min", &time_column(&grid)),
                        ("q_numeric_c", control.values()),
                        ("q_analytic_c", analytic.values()),
                    ]),
                );
            }
            Err(_) => {
                // No closed form for this configuration; export the numeric
                // control alone.
                bundle.push_csv(
                    "control.csv",
                    csv_table(&[("t_min", &time_column(&grid)), ("q_numeric_c", control.values())]),
                );
            }
        }

        let target: Vec<f64> = vec![params.t_star; grid.n_samples()];
        bundle.push_csv(
            "outlet.csv",
            csv_table(&[
                ("t_min", &time_column(&grid)),
                ("outlet_c", outlet.values()),
                ("target_c", &target),
            ]),
        );
        Ok(bundle)
    }
}
