//! `simple-validate`: forward solver of the one-equation model against its
//! closed-form solution, with a spatial refinement study.

use crate::bundle::{csv_table, ResultBundle};
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::registry::{RunOptions, Scenario};
use crate::scenarios::time_column;
use drier_core::signal::Signal;
use drier_core::simple::{analytic_outlet_series, solve_forward_outlet};
use drier_core::{SpaceTimeGrid, TimeSeries};

pub struct SimpleValidate;

impl Scenario for SimpleValidate {
    fn kind(&self) -> &'static str {
        "simple-validate"
    }

    fn validate(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<()> {
        let mut notes = Vec::new();
        let params = config.build_simple(&opts.base_dir, &mut notes)?;
        // The refinement study doubles the cell count; CFL must hold there too.
        let grid = config.build_grid(params.length, &mut notes)?;
        let doubled = SpaceTimeGrid::new(params.length, grid.n_cells() * 2, grid.horizon(), grid.n_steps())?;
        doubled.require_cfl(params.u0)?;
        Ok(())
    }

    fn run(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<ResultBundle> {
        let mut notes = Vec::new();
        let params = config.build_simple(&opts.base_dir, &mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        let control_signal = match &config.control {
            Some(c) => c.q.build(&opts.base_dir, &mut notes)?,
            None => Signal::Constant(params.t_star),
        };
        for note in &notes {
            opts.log(format!("[config] {note}"));
        }

        let mut bundle = ResultBundle::new(self.kind());
        let mut errors: Vec<(usize, f64)> = Vec::new();
        for factor in [1usize, 2, 4] {
            let n_cells = grid.n_cells() / 2 * factor;
            let study = SpaceTimeGrid::new(params.length, n_cells, grid.horizon(), grid.n_steps())?;
            let q = TimeSeries::from_fn(study, |t| control_signal.value(t));
            let numeric = solve_forward_outlet(&params, &q, &study)?;
            let analytic = analytic_outlet_series(&params, &q, &study)?;
            let max_err = numeric
                .values()
                .iter()
                .zip(analytic.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            errors.push((n_cells, max_err));
            opts.log(format!("[simple-validate] N = {n_cells}: max outlet error {max_err:.5} C"));

            if n_cells == grid.n_cells() {
                let err: Vec<f64> =
                    numeric.values().iter().zip(analytic.values()).map(|(a, b)| a - b).collect();
                bundle.push_csv(
                    "outlet.csv",
                    csv_table(&[
                        ("t_min", &time_column(&study)),
                        ("numeric_c", numeric.values()),
                        ("analytic_c", analytic.values()),
                        ("error_c", &err),
                    ]),
                );
            }
        }

        // Mean observed order across the two refinement steps.
        let order = 0.5
            * ((errors[0].1 / errors[1].1).log2() + (errors[1].1 / errors[2].1).log2());
        opts.log(format!("[simple-validate] observed spatial order {order:.3}"));

        bundle.summary.max_outlet_error = errors
            .iter()
            .find(|(n, _)| *n == grid.n_cells())
            .map(|(_, e)| *e);
        bundle.summary.convergence_order = Some(order);
        bundle.summary.outlet_errors_by_resolution = Some(errors);
        Ok(bundle)
    }
}
