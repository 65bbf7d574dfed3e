//! Scenario configuration: one structured TOML file per scenario, every
//! physical field carrying an explicit unit. Units are converted once at
//! load into the internal system (minutes, metres, deg C, watts), and the
//! conversions applied are recorded for logging.

use crate::error::{CliError, Result};
use drier_core::drier::DrierParams;
use drier_core::signal::Signal;
use drier_core::simple::SimpleModelParams;
use drier_core::SpaceTimeGrid;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// A value tagged with its unit, e.g. `{ value = 0.1, unit = "s" }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub unit: String,
}

impl Quantity {
    fn convert(&self, table: &[(&str, f64)], dimension: &str, notes: &mut Vec<String>) -> Result<f64> {
        for (unit, factor) in table {
            if self.unit == *unit {
                if (*factor - 1.0).abs() > 1e-15 {
                    notes.push(format!(
                        "converted {dimension}: {} {} -> {} (x{factor})",
                        self.value,
                        self.unit,
                        self.value * factor
                    ));
                }
                return Ok(self.value * factor);
            }
        }
        Err(CliError::Config(format!(
            "unknown {dimension} unit '{}' (expected one of {:?})",
            self.unit,
            table.iter().map(|(u, _)| *u).collect::<Vec<_>>()
        )))
    }

    /// Time in minutes.
    pub fn minutes(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("min", 1.0), ("s", 1.0 / 60.0), ("h", 60.0)], "time", notes)
    }

    /// Time in seconds.
    pub fn seconds(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("s", 1.0), ("min", 60.0), ("h", 3600.0)], "time", notes)
    }

    pub fn metres(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("m", 1.0)], "length", notes)
    }

    pub fn metres_per_minute(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("m_per_min", 1.0), ("m_per_s", 60.0)], "velocity", notes)
    }

    pub fn per_minute(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("per_min", 1.0), ("per_s", 60.0)], "rate", notes)
    }

    pub fn celsius(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("C", 1.0)], "temperature", notes)
    }

    pub fn watts(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("W", 1.0), ("kW", 1e3)], "power", notes)
    }

    pub fn watts_per_m3(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("W_per_m3", 1.0)], "heat density", notes)
    }

    pub fn square_metres(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("m2", 1.0)], "area", notes)
    }

    pub fn joules_per_kg_kelvin(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("J_per_kg_K", 1.0)], "specific heat", notes)
    }

    pub fn joules_per_kg(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("J_per_kg", 1.0), ("kJ_per_kg", 1e3)], "latent heat", notes)
    }

    pub fn watts_per_metre_kelvin(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("W_per_m_K", 1.0)], "conductivity", notes)
    }

    pub fn kg_per_minute(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("kg_per_min", 1.0), ("kg_per_s", 60.0), ("kg_per_h", 1.0 / 60.0)], "mass rate", notes)
    }

    pub fn kg_per_m3(&self, notes: &mut Vec<String>) -> Result<f64> {
        self.convert(&[("kg_per_m3", 1.0)], "density", notes)
    }
}

/// Closed-form signal families accepted in configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SignalConfig {
    Constant { value: f64 },
    Sinusoid { mean: f64, amplitude: f64, period: Quantity, #[serde(default)] phase: f64 },
    /// One sample per line (after a header line) at uniform spacing `dt`.
    Sampled { file: String, dt: Quantity },
}

impl SignalConfig {
    pub fn build(&self, base_dir: &Path, notes: &mut Vec<String>) -> Result<Signal> {
        match self {
            SignalConfig::Constant { value } => Ok(Signal::Constant(*value)),
            SignalConfig::Sinusoid { mean, amplitude, period, phase } => {
                let period_min = period.minutes(notes)?;
                if !(period_min > 0.0) {
                    return Err(CliError::Config("sinusoid period must be positive".into()));
                }
                Ok(Signal::Sinusoid {
                    mean: *mean,
                    amplitude: *amplitude,
                    omega: 2.0 * std::f64::consts::PI / period_min,
                    phase: *phase,
                })
            }
            SignalConfig::Sampled { file, dt } => {
                let path = base_dir.join(file);
                let values = read_sample_column(&path)?;
                Ok(Signal::Sampled { values, h: dt.minutes(notes)? })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub n_cells: usize,
    pub dt: Quantity,
    pub horizon: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleConfig {
    pub u0: Quantity,
    pub k: Quantity,
    pub length: Quantity,
    pub t_star: Quantity,
    pub t_init: SignalConfig,
    pub t_inlet: SignalConfig,
}

/// Inlet specification: either the density triple or the feed pair from
/// which the densities derive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DrierInletConfig {
    Feed { mu_dot: Quantity, x_w: f64, t: Quantity },
    Densities { eps_s: Quantity, eps_l: Quantity, t: Quantity },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrierConfig {
    pub u0: Quantity,
    pub length: Quantity,
    pub k_f: Quantity,
    pub x_star: f64,
    pub c_ps: Quantity,
    pub c_pl: Quantity,
    pub h_l: Quantity,
    pub t_ref: Quantity,
    pub power: Quantity,
    pub a_cross: Quantity,
    pub k_cond: Quantity,
    pub inlet: DrierInletConfig,
    #[serde(default)]
    pub clamp_condensation: bool,
}

/// Inlet forcing of the control scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForcingConfig {
    /// Temperature forcing amplitude [deg C] for the linear problem (the
    /// densities stay unperturbed), or ignored when delta_alpha is set.
    pub amplitude: Option<f64>,
    /// Relative modulation of inlet liquid density and temperature for the
    /// nonlinear problem.
    pub delta_alpha: Option<f64>,
    pub period: Quantity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    /// Absolute cost tolerance; defaults to 1e-10 * T_star^2 * horizon.
    pub tol_cost: Option<f64>,
    #[serde(default = "default_tol_grad")]
    pub tol_grad_rel: f64,
    #[serde(default = "default_first_step")]
    pub first_step_scale: f64,
}

fn default_tol_grad() -> f64 {
    1e-8
}

fn default_first_step() -> f64 {
    1e-3
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 1000,
            tol_cost: None,
            tol_grad_rel: default_tol_grad(),
            first_step_scale: default_first_step(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    /// Input series for the standalone spectrum scenario: one sample per line
    /// after a header.
    pub signal_file: Option<String>,
    /// Sample spacing of the input file.
    pub dt: Option<Quantity>,
    #[serde(default = "default_true")]
    pub exclude_dc: bool,
    #[serde(default = "default_peak_threshold")]
    pub peak_threshold: f64,
    #[serde(default)]
    pub hann_window: bool,
}

fn default_true() -> bool {
    true
}

fn default_peak_threshold() -> f64 {
    0.05
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self {
            signal_file: None,
            dt: None,
            exclude_dc: true,
            peak_threshold: default_peak_threshold(),
            hann_window: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ExportConfig {
    /// Write the full (t, x, eps_s, eps_l, T) trajectory CSV (large).
    #[serde(default)]
    pub trajectory_csv: bool,
    /// Write the versioned binary trajectory dump.
    #[serde(default)]
    pub trajectory_dump: bool,
}

/// Control used by plain forward scenarios (simple-validate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlConfig {
    pub q: SignalConfig,
}

/// The on-disk scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: String,
    pub output_dir: Option<String>,
    pub grid: GridConfig,
    pub simple: Option<SimpleConfig>,
    pub drier: Option<DrierConfig>,
    pub control: Option<ControlConfig>,
    pub forcing: Option<ForcingConfig>,
    pub optimizer: Option<OptimizerConfig>,
    pub spectrum: Option<SpectrumConfig>,
    pub export: Option<ExportConfig>,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: ScenarioConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Ok((config, base))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| CliError::Config(format!("config echo failed: {e}")))
    }

    /// Grid in internal units; dt must divide the horizon.
    pub fn build_grid(&self, length_m: f64, notes: &mut Vec<String>) -> Result<SpaceTimeGrid> {
        let dt = self.grid.dt.minutes(notes)?;
        let horizon = self.grid.horizon.minutes(notes)?;
        Ok(SpaceTimeGrid::with_dt(length_m, self.grid.n_cells, horizon, dt)?)
    }

    pub fn build_simple(&self, base_dir: &Path, notes: &mut Vec<String>) -> Result<SimpleModelParams> {
        let s = self
            .simple
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("[simple] block required for kind '{}'", self.kind)))?;
        let params = SimpleModelParams {
            u0: s.u0.metres_per_minute(notes)?,
            k: s.k.per_minute(notes)?,
            length: s.length.metres(notes)?,
            t_star: s.t_star.celsius(notes)?,
            t_init: s.t_init.build(base_dir, notes)?,
            t_inlet: s.t_inlet.build(base_dir, notes)?,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn build_drier(&self, notes: &mut Vec<String>) -> Result<DrierParams> {
        let d = self
            .drier
            .as_ref()
            .ok_or_else(|| CliError::Config(format!("[drier] block required for kind '{}'", self.kind)))?;
        let u0 = d.u0.metres_per_minute(notes)?;
        let length = d.length.metres(notes)?;
        let a_cross = d.a_cross.square_metres(notes)?;
        let (eps_s_inlet, eps_l_inlet, t_inlet) = match &d.inlet {
            DrierInletConfig::Feed { mu_dot, x_w, t } => {
                let mu = mu_dot.kg_per_minute(notes)?;
                if !(0.0..=1.0).contains(x_w) {
                    return Err(CliError::Config(format!("x_w = {x_w} outside [0, 1]")));
                }
                let rho_bar = mu / a_cross / u0;
                notes.push(format!(
                    "derived inlet densities from feed: rho_bar = {rho_bar} kg/m3 (mu_dot = {mu} kg/min)"
                ));
                ((1.0 - x_w) * rho_bar, x_w * rho_bar, t.celsius(notes)?)
            }
            DrierInletConfig::Densities { eps_s, eps_l, t } => (
                eps_s.kg_per_m3(notes)?,
                eps_l.kg_per_m3(notes)?,
                t.celsius(notes)?,
            ),
        };
        let params = DrierParams {
            u0,
            length,
            k_f: d.k_f.per_minute(notes)?,
            x_star: d.x_star,
            c_ps: d.c_ps.joules_per_kg_kelvin(notes)?,
            c_pl: d.c_pl.joules_per_kg_kelvin(notes)?,
            h_l: d.h_l.joules_per_kg(notes)?,
            t_ref: d.t_ref.celsius(notes)?,
            power: d.power.watts(notes)?,
            a_cross,
            eps_s_inlet,
            eps_l_inlet,
            t_inlet,
            k_cond: d.k_cond.watts_per_metre_kelvin(notes)?,
            clamp_condensation: d.clamp_condensation,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        self.optimizer.clone().unwrap_or_default()
    }

    pub fn spectrum_options(&self) -> drier_core::spectral::SpectrumOptions {
        let s = self.spectrum.clone().unwrap_or_default();
        drier_core::spectral::SpectrumOptions {
            exclude_dc: s.exclude_dc,
            peak_threshold: s.peak_threshold,
            hann_window: s.hann_window,
        }
    }
}

/// Read a one-column sample file: a header line followed by one value per
/// line (a trailing comma-separated column layout is accepted; the last
/// column is used).
pub fn read_sample_column(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read sample file {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 || line.trim().is_empty() {
            continue;
        }
        let field = line.rsplit(',').next().unwrap_or(line).trim();
        let v: f64 = field.parse().map_err(|e| {
            CliError::Config(format!("{}:{}: bad sample '{field}': {e}", path.display(), lineno + 1))
        })?;
        values.push(v);
    }
    if values.len() < 2 {
        return Err(CliError::Config(format!(
            "sample file {} holds {} values, need at least 2",
            path.display(),
            values.len()
        )));
    }
    Ok(values)
}
