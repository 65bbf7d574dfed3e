//! Scenario strategy registry: each runnable scenario kind sits behind the
//! common [`Scenario`] trait and is selected at runtime by the config's
//! `kind` string.

use crate::bundle::ResultBundle;
use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::scenarios;
use std::path::{Path, PathBuf};

/// Options from the command line that override or augment a config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub max_iters: Option<usize>,
    pub quiet: bool,
    pub output_dir: Option<PathBuf>,
    /// Directory that relative paths in the config resolve against.
    pub base_dir: PathBuf,
}

impl RunOptions {
    pub fn log(&self, message: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", message.as_ref());
        }
    }
}

/// One runnable scenario kind.
pub trait Scenario: Sync {
    /// Registry key, e.g. "simple-validate".
    fn kind(&self) -> &'static str;

    /// Check the config without running anything (units, referenced files,
    /// CFL admissibility).
    fn validate(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<()>;

    /// Execute the scenario and return its artifacts.
    fn run(&self, config: &ScenarioConfig, opts: &RunOptions) -> Result<ResultBundle>;
}

/// All registered scenario strategies.
pub fn registry() -> &'static [&'static dyn Scenario] {
    static REGISTRY: &[&dyn Scenario] = &[
        &scenarios::simple_validate::SimpleValidate,
        &scenarios::simple_control::SimpleControl,
        &scenarios::drier_equilibrium::DrierEquilibrium,
        &scenarios::drier_linear_control::DrierLinearControl,
        &scenarios::drier_nonlinear_control::DrierNonlinearControl { constrained: false },
        &scenarios::drier_nonlinear_control::DrierNonlinearControl { constrained: true },
        &scenarios::spectrum::Spectrum,
    ];
    REGISTRY
}

pub fn find_scenario(kind: &str) -> Result<&'static dyn Scenario> {
    registry().iter().copied().find(|s| s.kind() == kind).ok_or_else(|| {
        CliError::Config(format!(
            "unknown scenario kind '{kind}' (available: {})",
            registry().map_kinds().join(", ")
        ))
    })
}

trait Kinds {
    fn map_kinds(&self) -> Vec<&'static str>;
}

impl Kinds for &'static [&'static dyn Scenario] {
    fn map_kinds(&self) -> Vec<&'static str> {
        self.iter().map(|s| s.kind()).collect()
    }
}

/// Validate a parsed config and run the matching scenario, returning the
/// in-memory bundle without persisting anything.
pub fn run_scenario(config: &ScenarioConfig, opts: &RunOptions) -> Result<ResultBundle> {
    let scenario = find_scenario(&config.kind)?;
    scenario.validate(config, opts)?;
    let started = std::time::Instant::now();
    let mut bundle = scenario.run(config, opts)?;
    bundle.summary.runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(bundle)
}

/// Load a config file, validate it and run the matching scenario; the bundle
/// is persisted under the resolved output directory.
pub fn run_config_file(path: &Path, opts: &RunOptions) -> Result<PathBuf> {
    let (config, base) = ScenarioConfig::from_path(path)?;
    let mut opts = opts.clone();
    opts.base_dir = base;
    let scenario = find_scenario(&config.kind)?;
    scenario.validate(&config, &opts)?;
    let started = std::time::Instant::now();
    let mut bundle = scenario.run(&config, &opts)?;
    bundle.summary.runtime_ms = started.elapsed().as_secs_f64() * 1e3;
    bundle.config_echo = Some(config.to_toml()?);
    let out_dir = resolve_output_dir(&config, &opts, path)?;
    bundle.persist(&out_dir)?;
    opts.log(format!("[{}] wrote {} file(s) to {}", config.kind, bundle.files.len() + 1, out_dir.display()));
    Ok(out_dir)
}

/// Validate without running.
pub fn validate_config_file(path: &Path, opts: &RunOptions) -> Result<String> {
    let (config, base) = ScenarioConfig::from_path(path)?;
    let mut opts = opts.clone();
    opts.base_dir = base;
    let scenario = find_scenario(&config.kind)?;
    scenario.validate(&config, &opts)?;
    Ok(config.kind)
}

fn resolve_output_dir(config: &ScenarioConfig, opts: &RunOptions, path: &Path) -> Result<PathBuf> {
    if let Some(dir) = &opts.output_dir {
        return Ok(dir.clone());
    }
    if let Some(dir) = &config.output_dir {
        let p = PathBuf::from(dir);
        return Ok(if p.is_absolute() { p } else { opts.base_dir.join(p) });
    }
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| CliError::Config(format!("cannot derive output dir from {}", path.display())))?;
    Ok(opts.base_dir.join(format!("out-{stem}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_holds_all_seven_kinds() {
        let kinds: Vec<_> = registry().iter().map(|s| s.kind()).collect();
        assert_eq!(
            kinds,
            vec![
                "simple-validate",
                "simple-control",
                "drier-equilibrium",
                "drier-linear-control",
                "drier-nonlinear-control",
                "drier-constrained-control",
                "spectrum",
            ]
        );
    }

    #[test]
    fn unknown_kind_is_a_config_error() {
        match find_scenario("bogus") {
            Ok(_) => panic!("bogus kind should not resolve"),
            Err(err) => assert_eq!(err.exit_code(), 2),
        }
    }
}
