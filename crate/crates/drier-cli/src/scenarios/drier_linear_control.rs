//! `drier-linear-control`: suppress outlet temperature fluctuations of the
//! linearized drier with a heat-density perturbation found by BB descent.

use crate::bundle::{csv_table, ResultBundle};
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::registry::{RunOptions, Scenario};
use crate::scenarios::{bb_options, final_window, require_forcing, rms, space_column, time_column};
use drier_core::control::{bb_descent, linear_tracking_problem};
use drier_core::drier::solve_equilibrium;
use drier_core::linstab::{solve_forward_linear, PerturbationInlet};
use drier_core::spectral::power_spectrum;
use drier_core::TimeSeries;

pub struct DrierLinearControl;

impl Scenario for DrierLinearControl {
    fn kind(&self) -> &'static str {
        "drier-linear-control"
    }

    fn validate(&self, config: &ScenarioConfig, _opts: &RunOptions) -> Result<()> {
        let mut notes = Vec::new();
        let params = config.build_drier(&mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        grid.require_cfl(params.u0)?;
        let forcing = require_forcing(config)?;
        if forcing.amplitude.is_none() {
            return Err(crate::error::CliError::Config(
                "[forcing] needs an amplitude for the linear control scenario".into(),
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
        let amplitude = forcing.amplitude.expect("validated");
        let omega = 2.0 * std::f64::consts::PI / forcing.period.minutes(&mut notes)?;
        for note in &notes {
            opts.log(format!("[config] {note}"));
        }

        let equilibrium = solve_equilibrium(&params, &grid)?;
        let inlet = PerturbationInlet::temperature_sinusoid(amplitude, omega, &grid);
        let zero = TimeSeries::constant(grid, 0.0);
        let uncontrolled = solve_forward_linear(&equilibrium, &params, &inlet, &zero, &grid, None)?;

        let mut problem = linear_tracking_problem(&equilibrium, &params, &inlet, grid)?;
        let options = bb_options(&config.optimizer(), 0.0, opts);
        let (control, trace, outcome) = bb_descent(&mut problem, &zero, &options)?;
        opts.log(format!(
            "[drier-linear-control] {} iterations, residual {:.4e} C^2 min, stop {:?}",
            trace.len() - 1,
            outcome.best_cost,
            outcome.stop
        ));

        let controlled = solve_forward_linear(&equilibrium, &params, &inlet, &control, &grid, None)?;
        let relative_amplitude = controlled
            .final_state
            .max_relative_amplitude(equilibrium.eps_s, equilibrium.outlet_temperature());
        if relative_amplitude > 0.10 {
            opts.log(format!(
                "[drier-linear-control] warning: perturbations reach {:.0}% of the reference \
                 state; the linearization is questionable at this amplitude",
                100.0 * relative_amplitude
            ));
        }
        let rms_controlled = rms(final_window(&controlled.outlet_d_temperature));
        let rms_uncontrolled = rms(final_window(&uncontrolled.outlet_d_temperature));
        let reduction = 100.0 * (1.0 - rms_controlled / rms_uncontrolled.max(f64::MIN_POSITIVE));
        opts.log(format!(
            "[drier-linear-control] final-window outlet RMS {rms_controlled:.4e} vs {rms_uncontrolled:.4e} uncontrolled ({reduction:.2}% reduction)"
        ));

        // Spectrum of the optimal control (frequencies in rad/s).
        let spectrum = power_spectrum(&control, grid.dt() * 60.0, &config.spectrum_options())?;

        let mut bundle = ResultBundle::new(self.kind());
        bundle.summary.record_descent(&trace, outcome.stop);
        bundle.summary.residual = Some(outcome.best_cost);
        bundle.summary.rms_outlet_controlled = Some(rms_controlled);
        bundle.summary.rms_outlet_uncontrolled = Some(rms_uncontrolled);
        bundle.summary.rms_reduction_percent = Some(reduction);
        bundle.summary.control_kind = Some("heat-density perturbation".to_string());
        bundle.summary.record_spectrum(&spectrum);

        bundle.push_csv(
            "control.csv",
            csv_table(&[("t_min", &time_column(&grid)), ("dqdot_w_per_m3", control.values())]),
        );
        bundle.push_csv(
            "outlet.csv",
            csv_table(&[
                ("t_min", &time_column(&grid)),
                ("d_temperature_controlled_c", controlled.outlet_d_temperature.values()),
                ("d_temperature_uncontrolled_c", uncontrolled.outlet_d_temperature.values()),
            ]),
        );
        bundle.push_csv(
            "profile_final.csv",
            csv_table(&[
                ("x_m", &space_column(&grid)),
                ("d_temperature_c", controlled.final_state.d_temperature.values()),
                ("d_eps_l_kg_per_m3", controlled.final_state.d_eps_l.values()),
            ]),
        );
        bundle.push_csv("trace.csv", trace.to_csv());
        bundle.push_csv("spectrum.csv", drier_core::spectral::spectrum_to_csv(&spectrum));
        Ok(bundle)
    }
}
