//! Trapezoidal quadrature over the spatial and temporal grids.

use crate::field::{ScalarField, TimeSeries};

/// Trapezoidal rule over uniformly spaced samples with spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => 0.0,
        _ => {
            let inner: f64 = values[1..values.len() - 1].iter().sum();
            h * (0.5 * (values[0] + values[values.len() - 1]) + inner)
        }
    }
}

/// Trapezoidal integral of the product of two equally long sample vectors.
pub fn trapezoid_product(a: &[f64], b: &[f64], h: f64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.5 * (a[0] * b[0] + a[n - 1] * b[n - 1]);
    for i in 1..n - 1 {
        acc += a[i] * b[i];
    }
    h * acc
}

/// Running trapezoidal integral: out[i] = integral of `values[0..=i]`.
pub fn cumulative_trapezoid(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

/// Integral of a spatial profile over [0, length].
pub fn integrate_space(field: &ScalarField) -> f64 {
    trapezoid(field.values(), field.grid().dx())
}

/// Integral of a time signal over [0, horizon].
pub fn integrate_time(series: &TimeSeries) -> f64 {
    trapezoid(series.values(), series.grid().dt())
}

/// Discrete L2([0, horizon]) inner product of two signals sampled on the same
/// time grid, with uniform dt weights. This is the metric used by the descent
/// loop and by the adjoint-gradient identity, so that the pairing
/// dJ = <gradient, perturbation> holds exactly at every sample.
pub fn control_inner_product(a: &[f64], b: &[f64], dt: f64) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    dt * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}

pub fn control_norm(a: &[f64], dt: f64) -> f64 {
    control_inner_product(a, a, dt).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpaceTimeGrid;

    #[test]
    fn constant_over_length_five() {
        let g = SpaceTimeGrid::new(5.0, 50, 4.0, 40).unwrap();
        let f = ScalarField::constant(g, 1.0);
        assert!((integrate_space(&f) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn linear_is_exact() {
        let g = SpaceTimeGrid::new(5.0, 50, 4.0, 40).unwrap();
        let f = ScalarField::from_fn(g, |x| x);
        assert!((integrate_space(&f) - 12.5).abs() < 1e-12);
    }

    #[test]
    fn sine_matches_antiderivative() {
        // integral of sin over [0, 5] = 1 - cos(5)
        let g = SpaceTimeGrid::new(5.0, 200, 4.0, 40).unwrap();
        let f = ScalarField::from_fn(g, |x| x.sin());
        let exact = 1.0 - 5.0_f64.cos();
        assert!(
            (integrate_space(&f) - exact).abs() < 1e-4,
            "trapezoid error {} too large",
            (integrate_space(&f) - exact).abs()
        );
    }

    #[test]
    fn constant_two_over_horizon_four() {
        let g = SpaceTimeGrid::new(5.0, 10, 4.0, 64).unwrap();
        let s = TimeSeries::constant(g, 2.0);
        assert!((integrate_time(&s) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn full_period_sine_vanishes() {
        let g = SpaceTimeGrid::new(5.0, 10, 1.0, 128).unwrap();
        let s = TimeSeries::from_fn(g, |t| (2.0 * std::f64::consts::PI * t).sin());
        assert!(integrate_time(&s).abs() < 1e-8);
    }

    #[test]
    fn offset_sinusoid_over_three_periods() {
        // integral of 100 + 10 sin(2 pi t) over [0, 3] = 300
        let g = SpaceTimeGrid::new(5.0, 10, 3.0, 3000).unwrap();
        let s = TimeSeries::from_fn(g, |t| 100.0 + 10.0 * (2.0 * std::f64::consts::PI * t).sin());
        assert!((integrate_time(&s) - 300.0).abs() < 1e-6);
    }

    #[test]
    fn cumulative_matches_total() {
        let g = SpaceTimeGrid::new(5.0, 10, 2.0, 100).unwrap();
        let s = TimeSeries::from_fn(g, |t| t * t + 1.0);
        let cum = cumulative_trapezoid(s.values(), g.dt());
        assert_eq!(cum.len(), s.values().len());
        assert!((cum[cum.len() - 1] - integrate_time(&s)).abs() < 1e-12);
        assert_eq!(cum[0], 0.0);
    }
}
