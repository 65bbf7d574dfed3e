//! Result bundle: CSV series, descent trace, spectrum and a versioned JSON
//! summary, persisted together under the scenario's output directory.
//!
//! CSV convention: header row, comma separator, LF line endings, floats with
//! 17 significant digits so reruns are byte-identical.

use crate::error::{CliError, Result};
use drier_core::control::{DescentTrace, StopReason};
use drier_core::spectral::{Beat, Peak, SpectrumResult};
use serde::Serialize;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Format a float with 17 significant digits.
pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Build a CSV from named columns of equal length.
pub fn csv_table(columns: &[(&str, &[f64])]) -> String {
    let header: Vec<&str> = columns.iter().map(|(name, _)| *name).collect();
    let rows = columns.first().map(|(_, c)| c.len()).unwrap_or(0);
    debug_assert!(columns.iter().all(|(_, c)| c.len() == rows));
    let mut out = header.join(",");
    out.push('\n');
    for r in 0..rows {
        let mut first = true;
        for (_, col) in columns {
            if !first {
                out.push(',');
            }
            out.push_str(&fmt(col[r]));
            first = false;
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PeakSummary {
    pub omega_rad_per_s: f64,
    pub power: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BeatSummary {
    pub omega_1_rad_per_s: f64,
    pub omega_2_rad_per_s: f64,
    pub period_s: f64,
}

/// Versioned machine-readable run summary.
#[derive(Debug, Clone, Serialize, Default)]
pub struct Summary {
    pub schema_version: u32,
    pub kind: String,
    pub files: Vec<String>,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_cost: Option<f64>,
    /// Tracking cost of the returned control; the "residual" of a control run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized_final_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grad_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_outlet_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence_order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outlet_errors_by_resolution: Option<Vec<(usize, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peclet: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outlet_moisture: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outlet_temperature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rms_outlet_controlled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rms_outlet_uncontrolled: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rms_reduction_percent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_control: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peaks: Option<Vec<PeakSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beat: Option<BeatSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_discrepancy_outside_window: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jump_minus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jump_plus: Option<f64>,
}

impl Summary {
    pub fn new(kind: &str) -> Self {
        Self { schema_version: SCHEMA_VERSION, kind: kind.to_string(), ..Default::default() }
    }

    pub fn record_descent(&mut self, trace: &DescentTrace, stop: StopReason) {
        self.initial_cost = trace.initial_cost();
        self.final_cost = trace.final_cost();
        self.iterations = Some(trace.len().saturating_sub(1));
        self.grad_norm = trace.records.last().map(|r| r.grad_norm);
        self.stop_reason = Some(format!("{stop:?}"));
    }

    pub fn record_spectrum(&mut self, spectrum: &SpectrumResult) {
        self.peaks = Some(
            spectrum
                .detected_peaks
                .iter()
                .map(|p: &Peak| PeakSummary { omega_rad_per_s: p.omega, power: p.power })
                .collect(),
        );
        self.beat = spectrum.beat.map(|b: Beat| BeatSummary {
            omega_1_rad_per_s: b.omega_1,
            omega_2_rad_per_s: b.omega_2,
            period_s: b.period,
        });
    }
}

/// One output artifact of a run.
#[derive(Debug, Clone)]
pub enum Artifact {
    Text(String),
    Binary(Vec<u8>),
}

/// Everything a scenario produced, held in memory until persisted.
#[derive(Debug)]
pub struct ResultBundle {
    pub summary: Summary,
    pub files: Vec<(String, Artifact)>,
    /// The echo of the configuration that produced the bundle.
    pub config_echo: Option<String>,
}

impl ResultBundle {
    pub fn new(kind: &str) -> Self {
        Self { summary: Summary::new(kind), files: Vec::new(), config_echo: None }
    }

    pub fn push_csv(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), Artifact::Text(content)));
    }

    pub fn push_binary(&mut self, name: &str, content: Vec<u8>) {
        self.files.push((name.to_string(), Artifact::Binary(content)));
    }

    /// Write every artifact plus summary.json (and the config echo) under
    /// `dir`. An empty bundle writes nothing beyond the summary.
    pub fn persist(&mut self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        self.summary.files = self.files.iter().map(|(name, _)| name.clone()).collect();
        for (name, artifact) in &self.files {
            let path = dir.join(name);
            match artifact {
                Artifact::Text(text) => std::fs::write(&path, text),
                Artifact::Binary(bytes) => std::fs::write(&path, bytes),
            }
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        }
        if let Some(echo) = &self.config_echo {
            std::fs::write(dir.join("config_echo.toml"), echo)
                .map_err(|e| CliError::Io(format!("config echo: {e}")))?;
        }
        let json = serde_json::to_string_pretty(&self.summary)
            .map_err(|e| CliError::Io(format!("summary serialization: {e}")))?;
        std::fs::write(dir.join("summary.json"), json + "\n")
            .map_err(|e| CliError::Io(format!("summary: {e}")))?;
        Ok(())
    }
}
