//! `drier-equilibrium`: steady profiles under constant inlet conditions plus
//! the Peclet and amplifier diagnostics.

use crate::bundle::{csv_table, ResultBundle};
use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::registry::{RunOptions, Scenario};
use crate::scenarios::space_column;
use drier_core::drier::{discrete_equilibrium, peclet_number, solve_equilibrium};
use drier_core::linstab::positive_eigenvalue_integral;

pub struct DrierEquilibrium;

impl Scenario for DrierEquilibrium {
    fn kind(&self) -> &'static str {
        "drier-equilibrium"
    }

    fn validate(&self, config: &ScenarioConfig, _opts: &RunOptions) -> Result<()> {
        let mut notes = Vec::new();
        let params = config.build_drier(&mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        grid.require_cfl(params.u0)?;
        Ok(())
    }

    fn run(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<ResultBundle> {
        let mut notes = Vec::new();
        let params = config.build_drier(&mut notes)?;
        let grid = config.build_grid(params.length, &mut notes)?;
        for note in &notes {
            opts.log(format!("[config] {note}"));
        }

        let continuum = solve_equilibrium(&params, &grid)?;
        let discrete = discrete_equilibrium(&params, &grid)?;
        let lambda = positive_eigenvalue_integral(&continuum, &params);
        let growth = (lambda[grid.n_cells()] / params.u0).exp();
        let pe = peclet_number(&params);

        opts.log(format!(
            "[drier-equilibrium] Pe = {pe:.1}, outlet X = {:.5}, outlet T = {:.3} C, growth factor {growth:.4}",
            continuum.outlet_moisture(),
            continuum.outlet_temperature()
        ));

        let mut bundle = ResultBundle::new(self.kind());
        bundle.summary.peclet = Some(pe);
        bundle.summary.outlet_moisture = Some(continuum.outlet_moisture());
        bundle.summary.outlet_temperature = Some(continuum.outlet_temperature());
        bundle.summary.growth_factor = Some(growth);

        // Plot-ready steady profiles.
        bundle.push_csv(
            "equilibrium.csv",
            csv_table(&[
                ("x_m", &space_column(&grid)),
                ("eps_w_kg_per_m3", continuum.eps_l.values()),
                ("temperature_c", continuum.temperature.values()),
            ]),
        );
        // The solver's own fixed point, for initializing forward runs.
        bundle.push_csv(
            "equilibrium_discrete.csv",
            csv_table(&[
                ("x_m", &space_column(&grid)),
                ("eps_w_kg_per_m3", discrete.eps_l.values()),
                ("temperature_c", discrete.temperature.values()),
            ]),
        );
        Ok(bundle)
    }
}
