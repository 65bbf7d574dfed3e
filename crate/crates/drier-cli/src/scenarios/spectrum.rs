//! `spectrum`: power spectrum, peaks and beat period of a sampled signal
//! read from a file.

use crate::bundle::ResultBundle;
use crate::config::{read_sample_column, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::registry::{RunOptions, Scenario};
use drier_core::spectral::{power_spectrum_samples, spectrum_to_csv};

pub struct Spectrum;

impl Scenario for Spectrum {
    fn kind(&self) -> &'static str {
        "spectrum"
    }

    fn validate(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<()> {
        let spec = config
            .spectrum
            .as_ref()
            .ok_or_else(|| CliError::Config("[spectrum] block required for kind 'spectrum'".into()))?;
        let file = spec
            .signal_file
            .as_ref()
            .ok_or_else(|| CliError::Config("[spectrum] signal_file is required".into()))?;
        if spec.dt.is_none() {
            return Err(CliError::Config("[spectrum] dt (sample spacing) is required".into()));
        }
        let path = opts.base_dir.join(file);
        if !path.exists() {
            return Err(CliError::Config(format!("signal file {} does not exist", path.display())));
        }
        Ok(())
    }

    fn run(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<ResultBundle> {
        self.validate(config, opts)?;
        let spec = config.spectrum.as_ref().expect("validated");
        let mut notes = Vec::new();
        let dt_s = spec.dt.as_ref().expect("validated").seconds(&mut notes)?;
        for note in &notes {
            opts.log(format!("[config] {note}"));
        }
        let path = opts.base_dir.join(spec.signal_file.as_ref().expect("validated"));
        let samples = read_sample_column(&path)?;
        let spectrum = power_spectrum_samples(&samples, dt_s, &config.spectrum_options())?;

        opts.log(format!(
            "[spectrum] {} samples, {} peak(s) detected",
            samples.len(),
            spectrum.detected_peaks.len()
        ));
        let mut bundle = ResultBundle::new(self.kind());
        bundle.summary.record_spectrum(&spectrum);
        bundle.push_csv("spectrum.csv", spectrum_to_csv(&spectrum));
        Ok(bundle)
    }
}
