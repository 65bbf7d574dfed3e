//! Boundary and initial data as closed-form signal families.
//!
//! The analytic optimal control needs exact derivatives of the inlet and
//! initial data, so these are carried symbolically (constant or sinusoid)
//! rather than as sampled arrays. Sampled series are accepted for purely
//! numerical runs; asking them for a derivative is an error.

use crate::error::{ModelError, Result};

/// A scalar signal of one variable (time for inlet data, position for initial data).
#[derive(Debug, Clone, PartialEq)]
pub enum Signal {
    Constant(f64),
    /// mean + amplitude * sin(omega * s + phase)
    Sinusoid { mean: f64, amplitude: f64, omega: f64, phase: f64 },
    /// Uniformly sampled values with spacing `h`, linearly interpolated.
    Sampled { values: Vec<f64>, h: f64 },
}

impl Signal {
    pub fn sinusoid(mean: f64, amplitude: f64, omega: f64) -> Self {
        Signal::Sinusoid { mean, amplitude, omega, phase: 0.0 }
    }

    pub fn value(&self, s: f64) -> f64 {
        match self {
            Signal::Constant(c) => *c,
            Signal::Sinusoid { mean, amplitude, omega, phase } => {
                mean + amplitude * (omega * s + phase).sin()
            }
            Signal::Sampled { values, h } => {
                if values.is_empty() {
                    return 0.0;
                }
                let max = (values.len() - 1) as f64 * h;
                let s = s.clamp(0.0, max);
                let pos = s / h;
                let i = (pos.floor() as usize).min(values.len().saturating_sub(2));
                let frac = pos - i as f64;
                values[i] * (1.0 - frac) + values[i + 1] * frac
            }
        }
    }

    /// Exact derivative with respect to the signal variable.
    pub fn derivative(&self, s: f64) -> Result<f64> {
        match self {
            Signal::Constant(_) => Ok(0.0),
            Signal::Sinusoid { amplitude, omega, phase, .. } => {
                Ok(amplitude * omega * (omega * s + phase).cos())
            }
            Signal::Sampled { .. } => Err(ModelError::Unsupported(
                "sampled signals carry no analytic derivative; use a sinusoid family".into(),
            )),
        }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, Signal::Sampled { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sinusoid_value_and_derivative() {
        // Inlet family 100 + 10 sin(2 pi t)
        let s = Signal::sinusoid(100.0, 10.0, 2.0 * PI);
        assert!((s.value(0.0) - 100.0).abs() < 1e-12);
        assert!((s.value(0.25) - 110.0).abs() < 1e-12);
        assert!((s.derivative(0.0).unwrap() - 20.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn sampled_interpolates_and_refuses_derivative() {
        let s = Signal::Sampled { values: vec![0.0, 2.0, 4.0], h: 0.5 };
        assert!((s.value(0.25) - 1.0).abs() < 1e-12);
        assert!((s.value(10.0) - 4.0).abs() < 1e-12); // clamped
        assert!(s.derivative(0.1).is_err());
    }
}
