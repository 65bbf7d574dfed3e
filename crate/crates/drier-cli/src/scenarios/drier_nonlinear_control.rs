//! `drier-nonlinear-control` and `drier-constrained-control`: optimal heat
//! density for the full nonlinear model under sinusoidal inlet modulation.
//! The constrained variant descends in the square-root parametrization
//! q = theta^2/2, keeping the heat density nonnegative sample by sample.

use crate::bundle::{csv_table, ResultBundle};
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::registry::{RunOptions, Scenario};
use crate::scenarios::{bb_options, final_window, require_forcing, rms, space_column, time_column};
use drier_core::control::{
    bb_descent, bb_descent_nonneg, cost, default_cost_tolerance, nonlinear_tracking_problem,
    ControlKind, ControlSignal,
};
use drier_core::drier::{
    discrete_equilibrium, heat_source_density, solve_forward_nonlinear, write_trajectory_csv,
    write_trajectory_dump, InletSeries,
};
use drier_core::spectral::power_spectrum;
use drier_core::TimeSeries;

pub struct DrierNonlinearControl {
    pub constrained: bool,
}

impl Scenario for DrierNonlinearControl {
    fn kind(&self) -> &'static str {
        if self.constrained {
            "drier-constrained-control"
        } else {
            "drier-nonlinear-control"
        }
    }

    fn validate(&self, config: &ScenarioConfig, _opts: &RunOptions) -> Result<()> {
        let mut notes = Vec::new();
        let params = config.build_drier(&mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        grid.require_cfl(params.u0)?;
        let forcing = require_forcing(config)?;
        if forcing.delta_alpha.is_none() {
            return Err(crate::error::CliError::Config(
                "[forcing] needs delta_alpha for the nonlinear control scenarios".into(),
            ));
        }
        forcing.period.minutes(&mut notes)?;
        Ok(())
    }

    fn run(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<ResultBundle> {
        let mut notes = Vec::new();
        let params = config.build_drier(&mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        let forcing = require_forcing(config)?;
        let delta_alpha = forcing.delta_alpha.expect("validated");
        let omega = 2.0 * std::f64::consts::PI / forcing.period.minutes(&mut notes)?;
        for note in &notes {
            opts.log(format!("[config] {note}"));
        }

        // The run starts on the solver's own equilibrium and targets its
        // outlet temperature, so the control problem opens with zero mismatch
        // at t = 0 (no discontinuous control demanded).
        let equilibrium = discrete_equilibrium(&params, &grid)?;
        let t_star = equilibrium.outlet_temperature();
        let inlet = InletSeries::modulated(
            equilibrium.eps_s,
            equilibrium.eps_l.values()[0],
            equilibrium.temperature.values()[0],
            delta_alpha,
            omega,
            &grid,
        );
        let qdot0 = heat_source_density(&params);

        // Constant-heat baseline.
        let baseline_control = TimeSeries::constant(grid, qdot0);
        let baseline = solve_forward_nonlinear(&params, &baseline_control, &inlet, &grid, Some(&equilibrium))?;
        let baseline_outlet = baseline.outlet_temperature();
        let baseline_cost = cost(&baseline_outlet, t_star);

        let mut problem = nonlinear_tracking_problem(&params, &inlet, &equilibrium, t_star, grid);
        let options = bb_options(&config.optimizer(), default_cost_tolerance(t_star, grid.horizon()), opts);
        let (control, trace, outcome) = if self.constrained {
            let theta0 = TimeSeries::constant(grid, (2.0 * qdot0).sqrt());
            bb_descent_nonneg(&mut problem, &theta0, &options)?
        } else {
            bb_descent(&mut problem, &baseline_control, &options)?
        };
        let control_signal = ControlSignal::new(
            control.clone(),
            if self.constrained { ControlKind::SquaredParametrization } else { ControlKind::HeatDensity },
        );
        opts.log(format!(
            "[{}] {} iterations, residual {:.4e} C^2 min (baseline {:.4e}), stop {:?}",
            self.kind(),
            trace.len() - 1,
            outcome.best_cost,
            baseline_cost,
            outcome.stop
        ));

        let trajectory = solve_forward_nonlinear(&params, &control, &inlet, &grid, Some(&equilibrium))?;
        let outlet = trajectory.outlet_temperature();
        let mismatch: Vec<f64> = outlet.values().iter().map(|v| v - t_star).collect();
        let baseline_mismatch: Vec<f64> =
            baseline_outlet.values().iter().map(|v| v - t_star).collect();
        let mismatch_series = TimeSeries::new(grid, mismatch)?;
        let baseline_series = TimeSeries::new(grid, baseline_mismatch)?;
        let rms_controlled = rms(final_window(&mismatch_series));
        let rms_baseline = rms(final_window(&baseline_series));
        let reduction = 100.0 * (1.0 - rms_controlled / rms_baseline.max(f64::MIN_POSITIVE));
        opts.log(format!(
            "[{}] final-window outlet RMS {rms_controlled:.4e} vs baseline {rms_baseline:.4e} ({reduction:.2}%)",
            self.kind()
        ));

        let spectrum = power_spectrum(&control, grid.dt() * 60.0, &config.spectrum_options())?;

        let mut bundle = ResultBundle::new(self.kind());
        bundle.summary.record_descent(&trace, outcome.stop);
        bundle.summary.residual = Some(outcome.best_cost);
        bundle.summary.baseline_cost = Some(baseline_cost);
        bundle.summary.rms_outlet_controlled = Some(rms_controlled);
        bundle.summary.rms_outlet_uncontrolled = Some(rms_baseline);
        bundle.summary.rms_reduction_percent = Some(reduction);
        bundle.summary.outlet_temperature = Some(t_star);
        bundle.summary.min_control =
            control.values().iter().copied().min_by(f64::total_cmp);
        bundle.summary.control_kind = Some(
            match control_signal.kind {
                ControlKind::SquaredParametrization => "heat-density via squared parametrization",
                _ => "heat-density",
            }
            .to_string(),
        );
        bundle.summary.record_spectrum(&spectrum);

        bundle.push_csv(
            "control.csv",
            csv_table(&[("t_min", &time_column(&grid)), ("qdot_w_per_m3", control.values())]),
        );
        let target: Vec<f64> = vec![t_star; grid.n_samples()];
        bundle.push_csv(
            "outlet.csv",
            csv_table(&[
                ("t_min", &time_column(&grid)),
                ("temperature_controlled_c", outlet.values()),
                ("temperature_baseline_c", baseline_outlet.values()),
                ("target_c", &target),
            ]),
        );
        let final_state = trajectory.final_state();
        let moisture = final_state.moisture_content()?;
        bundle.push_csv(
            "profile_final.csv",
            csv_table(&[
                ("x_m", &space_column(&grid)),
                ("eps_s_kg_per_m3", final_state.eps_s.values()),
                ("eps_l_kg_per_m3", final_state.eps_l.values()),
                ("temperature_c", final_state.temperature.values()),
                ("moisture_content", moisture.values()),
            ]),
        );
        if self.constrained {
            // The descent variable itself: q = theta^2/2 pointwise.
            let theta: Vec<f64> = outcome.solution.clone();
            bundle.push_csv(
                "theta.csv",
                csv_table(&[("t_min", &time_column(&grid)), ("theta", &theta)]),
            );
        }
        bundle.push_csv("trace.csv", trace.to_csv());
        bundle.push_csv("spectrum.csv", drier_core::spectral::spectrum_to_csv(&spectrum));

        let export = config.export.clone().unwrap_or_default();
        if export.trajectory_csv {
            let mut out = Vec::new();
            write_trajectory_csv(&trajectory, &mut out)?;
            bundle.push_csv("trajectory.csv", String::from_utf8_lossy(&out).into_owned());
        }
        if export.trajectory_dump {
            let mut out = Vec::new();
            write_trajectory_dump(&trajectory, &mut out)?;
            bundle.push_binary("trajectory.bin", out);
        }
        Ok(bundle)
    }
}
