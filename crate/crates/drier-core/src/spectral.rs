//! Power spectra of control signals, peak detection and beat-period
//! extraction.

use crate::error::{ModelError, Result};
use crate::field::TimeSeries;
use rustfft::{num_complex::Complex, FftPlanner};

/// A detected spectral peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Angular frequency [rad/s].
    pub omega: f64,
    /// Normalized power in [0, 1].
    pub power: f64,
}

/// Two-peak beat diagnosis: period 2 pi / |omega_1 - omega_2| (no division
/// by two).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beat {
    pub omega_1: f64,
    pub omega_2: f64,
    /// Beat period [s].
    pub period: f64,
}

/// Single-sided power spectrum of a uniformly sampled signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Angular frequencies [rad/s], strictly increasing with spacing
    /// 2 pi / (n dt).
    pub frequencies: Vec<f64>,
    /// Raw single-sided power; sums to the signal energy sum(x^2).
    pub power: Vec<f64>,
    /// Power scaled to unit maximum over the included bins; the omega = 0 bin
    /// is zeroed when excluded from consideration.
    pub normalized_power: Vec<f64>,
    /// Local maxima above the detection threshold, strongest first.
    pub detected_peaks: Vec<Peak>,
    /// Present when at least two peaks were detected.
    pub beat: Option<Beat>,
}

/// Spectrum options. The detection threshold is a fraction of the global
/// maximum; a peak must also exceed both neighbours.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumOptions {
    pub exclude_dc: bool,
    pub peak_threshold: f64,
    pub hann_window: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { exclude_dc: true, peak_threshold: 0.05, hann_window: false }
    }
}

/// Compute the single-sided power spectrum of `signal`; `dt_seconds` is the
/// sample spacing in seconds (frequencies are reported in rad/s regardless of
/// the model's internal time unit).
pub fn power_spectrum(
    signal: &TimeSeries,
    dt_seconds: f64,
    options: &SpectrumOptions,
) -> Result<SpectrumResult> {
    power_spectrum_samples(signal.values(), dt_seconds, options)
}

/// Same as [`power_spectrum`] for a raw sample slice.
pub fn power_spectrum_samples(
    samples: &[f64],
    dt_seconds: f64,
    options: &SpectrumOptions,
) -> Result<SpectrumResult> {
    let n = samples.len();
    if n < 17 {
        return Err(ModelError::Domain(format!(
            "power spectrum needs at least 16 steps (17 samples), got {n}"
        )));
    }
    if !(dt_seconds > 0.0) {
        return Err(ModelError::Domain(format!("sample spacing must be positive, got {dt_seconds}")));
    }

    let mut buffer: Vec<Complex<f64>> = if options.hann_window {
        samples
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let w = 0.5
                    * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (n as f64 - 1.0)).cos());
                Complex::new(v * w, 0.0)
            })
            .collect()
    } else {
        samples.iter().map(|v| Complex::new(*v, 0.0)).collect()
    };
    FftPlanner::new().plan_fft_forward(n).process(&mut buffer);

    // Single-sided bins; sum of `power` equals sum(x^2) (discrete Parseval).
    let n_bins = n / 2 + 1;
    let d_omega = 2.0 * std::f64::consts::PI / (n as f64 * dt_seconds);
    let mut frequencies = Vec::with_capacity(n_bins);
    let mut power = Vec::with_capacity(n_bins);
    for m in 0..n_bins {
        frequencies.push(m as f64 * d_omega);
        let mut p = buffer[m].norm_sqr();
        let mirror = (n - m) % n;
        if mirror != m {
            p += buffer[mirror].norm_sqr();
        }
        power.push(p / n as f64);
    }

    let first = if options.exclude_dc { 1 } else { 0 };
    let max_power = power[first..].iter().fold(0.0f64, |m, v| m.max(*v));
    let mut normalized_power: Vec<f64> = power
        .iter()
        .map(|p| if max_power > 0.0 { p / max_power } else { 0.0 })
        .collect();
    if options.exclude_dc {
        normalized_power[0] = 0.0;
    }

    let detected_peaks = detect_peaks(&frequencies, &normalized_power, first, options.peak_threshold);
    let beat = detect_beat_from_peaks(&detected_peaks);

    Ok(SpectrumResult { frequencies, power, normalized_power, detected_peaks, beat })
}

/// Local maxima of the normalized spectrum above `threshold`, sorted by power
/// descending.
fn detect_peaks(frequencies: &[f64], normalized: &[f64], first: usize, threshold: f64) -> Vec<Peak> {
    let mut peaks = Vec::new();
    for m in first.max(1)..normalized.len() - 1 {
        let p = normalized[m];
        if p >= threshold && p > normalized[m - 1] && p > normalized[m + 1] {
            peaks.push(Peak { omega: frequencies[m], power: p });
        }
    }
    peaks.sort_by(|a, b| b.power.total_cmp(&a.power));
    peaks
}

/// Beat of the two strongest peaks; `None` with fewer than two.
pub fn detect_beat(spectrum: &SpectrumResult) -> Option<Beat> {
    detect_beat_from_peaks(&spectrum.detected_peaks)
}

fn detect_beat_from_peaks(peaks: &[Peak]) -> Option<Beat> {
    if peaks.len() < 2 {
        return None;
    }
    let (a, b) = (peaks[0], peaks[1]);
    let delta = (a.omega - b.omega).abs();
    if delta == 0.0 {
        return None;
    }
    Some(Beat { omega_1: a.omega, omega_2: b.omega, period: 2.0 * std::f64::consts::PI / delta })
}

/// CSV export: omega_rad_per_s, normalized_power.
pub fn spectrum_to_csv(spectrum: &SpectrumResult) -> String {
    let mut out = String::from("omega_rad_per_s,normalized_power\n");
    for (w, p) in spectrum.frequencies.iter().zip(&spectrum.normalized_power) {
        out.push_str(&format!("{w:.16e},{p:.16e}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpaceTimeGrid;
    use std::f64::consts::PI;

    /// `n_samples` values at unit spacing (dt = 1 s); bin m sits at
    /// omega = 2 pi m / n_samples.
    fn series(n_samples: usize, f: impl Fn(f64) -> f64) -> (TimeSeries, f64) {
        let n_steps = n_samples - 1;
        let grid = SpaceTimeGrid::new(1.0, 4, n_steps as f64, n_steps).unwrap();
        (TimeSeries::from_fn(grid, f), grid.dt())
    }

    #[test]
    fn pure_sinusoid_has_a_single_clean_peak() {
        // 8 full periods across 256 samples: the tone sits exactly on bin 8.
        let n = 256usize;
        let (signal, dt) = series(n, |t| (2.0 * PI * 8.0 / n as f64 * t).sin());
        let spec = power_spectrum(&signal, dt, &SpectrumOptions::default()).unwrap();
        assert_eq!(spec.detected_peaks.len(), 1);
        let peak = spec.detected_peaks[0];
        assert!((peak.omega - 2.0 * PI * 8.0 / n as f64).abs() < 1e-12);
        assert!((peak.power - 1.0).abs() < 1e-12);
        for (m, p) in spec.normalized_power.iter().enumerate() {
            if m != 8 {
                assert!(*p < 1e-6, "bin {m} leaks {p}");
            }
        }
    }

    #[test]
    fn two_tones_give_two_unit_order_peaks_and_a_beat() {
        let n = 512usize;
        let w1 = 2.0 * PI * 12.0 / n as f64;
        let w2 = 2.0 * PI * 17.0 / n as f64;
        let (signal, dt) = series(n, |t| (w1 * t).sin() + 0.8 * (w2 * t).sin());
        let spec = power_spectrum(&signal, dt, &SpectrumOptions::default()).unwrap();
        assert_eq!(spec.detected_peaks.len(), 2);
        let beat = spec.beat.expect("two peaks imply a beat");
        let expected = 2.0 * PI / (w2 - w1);
        assert!(
            (beat.period - expected).abs() <= 2.0 * PI / (n as f64),
            "beat period {} vs {expected}",
            beat.period
        );
    }

    #[test]
    fn single_peak_has_no_beat() {
        let n = 128usize;
        let (signal, dt) = series(n, |t| (2.0 * PI * 5.0 / n as f64 * t).sin());
        let spec = power_spectrum(&signal, dt, &SpectrumOptions::default()).unwrap();
        assert!(spec.beat.is_none());
        assert!(detect_beat(&spec).is_none());
    }

    #[test]
    fn parseval_energy_is_conserved() {
        let n = 300usize;
        let (signal, dt) = series(n, |t| 3.0 + (0.7 * t).sin() + 0.3 * (2.9 * t).cos() + 0.05 * t);
        let spec =
            power_spectrum(&signal, dt, &SpectrumOptions { exclude_dc: false, ..Default::default() })
                .unwrap();
        let energy: f64 = signal.values().iter().map(|v| v * v).sum();
        let total: f64 = spec.power.iter().sum();
        assert!(
            (total - energy).abs() <= 1e-10 * energy,
            "Parseval violated: bins {total}, energy {energy}"
        );
    }

    #[test]
    fn peak_frequencies_are_scale_invariant() {
        let n = 256usize;
        let make = |c: f64| {
            let (signal, dt) = series(n, |t| {
                c * ((2.0 * PI * 9.0 / n as f64 * t).sin() + 0.5 * (2.0 * PI * 30.0 / n as f64 * t).sin())
            });
            power_spectrum(&signal, dt, &SpectrumOptions::default()).unwrap()
        };
        let a = make(1.0);
        let b = make(137.5);
        let fa: Vec<f64> = a.detected_peaks.iter().map(|p| p.omega).collect();
        let fb: Vec<f64> = b.detected_peaks.iter().map(|p| p.omega).collect();
        assert_eq!(fa, fb);
    }

    #[test]
    fn dc_exclusion_masks_the_constant_component() {
        let n = 128usize;
        let (signal, dt) = series(n, |t| 50.0 + 0.1 * (2.0 * PI * 4.0 / n as f64 * t).sin());
        let kept =
            power_spectrum(&signal, dt, &SpectrumOptions { exclude_dc: false, ..Default::default() })
                .unwrap();
        assert!((kept.normalized_power[0] - 1.0).abs() < 1e-12, "DC dominates when kept");
        let masked = power_spectrum(&signal, dt, &SpectrumOptions::default()).unwrap();
        assert_eq!(masked.normalized_power[0], 0.0);
        let max = masked.normalized_power.iter().cloned().fold(0.0f64, f64::max);
        assert!((max - 1.0).abs() < 1e-12);
        assert!((masked.detected_peaks[0].omega - 2.0 * PI * 4.0 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let (signal, dt) = series(11, |_| 1.0);
        assert!(power_spectrum(&signal, dt, &SpectrumOptions::default()).is_err());
    }
}
