//! Field containers: spatial profiles and time series on a shared grid.

use crate::error::{ModelError, Result};
use crate::grid::SpaceTimeGrid;

/// A scalar profile sampled at the spatial nodes of a grid (length n_cells + 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: SpaceTimeGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: SpaceTimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(ModelError::GridMismatch(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.n_nodes()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: SpaceTimeGrid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.n_nodes()] }
    }

    /// Sample a function of x at every node.
    pub fn from_fn(grid: SpaceTimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n_nodes()).map(|i| f(grid.x(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn require_same_grid(&self, other: &SpaceTimeGrid, what: &str) -> Result<()> {
        if &self.grid != other {
            return Err(ModelError::GridMismatch(format!("{what}: field grid differs from expected grid")));
        }
        Ok(())
    }
}

/// A scalar signal sampled at the time nodes of a grid (length n_steps + 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    grid: SpaceTimeGrid,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(grid: SpaceTimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n_samples() {
            return Err(ModelError::GridMismatch(format!(
                "series has {} values, grid has {} time samples",
                values.len(),
                grid.n_samples()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: SpaceTimeGrid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.n_samples()] }
    }

    /// Sample a function of t at every time node.
    pub fn from_fn(grid: SpaceTimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n_samples()).map(|n| f(grid.t(n))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Linear interpolation at an arbitrary time in [0, horizon].
    pub fn interpolate(&self, t: f64) -> Result<f64> {
        let grid = &self.grid;
        if t < -1e-12 * grid.horizon().max(1.0) || t > grid.horizon() * (1.0 + 1e-12) {
            return Err(ModelError::Domain(format!(
                "t = {t} outside sampled window [0, {}]",
                grid.horizon()
            )));
        }
        let t = t.clamp(0.0, grid.horizon());
        let pos = t / grid.dt();
        let n = (pos.floor() as usize).min(grid.n_steps().saturating_sub(1));
        let frac = pos - n as f64;
        Ok(self.values[n] * (1.0 - frac) + self.values[n + 1] * frac)
    }

    pub fn require_same_grid(&self, other: &SpaceTimeGrid, what: &str) -> Result<()> {
        if &self.grid != other {
            return Err(ModelError::GridMismatch(format!("{what}: series grid differs from expected grid")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> SpaceTimeGrid {
        SpaceTimeGrid::new(5.0, 10, 2.0, 20).unwrap()
    }

    #[test]
    fn length_checks() {
        let g = grid();
        assert!(ScalarField::new(g, vec![0.0; 10]).is_err());
        assert!(ScalarField::new(g, vec![0.0; 11]).is_ok());
        assert!(TimeSeries::new(g, vec![0.0; 20]).is_err());
        assert!(TimeSeries::new(g, vec![0.0; 21]).is_ok());
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let g = grid();
        let other = SpaceTimeGrid::new(5.0, 12, 2.0, 20).unwrap();
        let f = ScalarField::constant(g, 1.0);
        assert!(f.require_same_grid(&other, "test").is_err());
        assert!(f.require_same_grid(&g, "test").is_ok());
    }

    #[test]
    fn interpolation_is_linear_and_bounded() {
        let g = grid();
        let s = TimeSeries::from_fn(g, |t| 3.0 * t + 1.0);
        assert!((s.interpolate(0.55).unwrap() - (3.0 * 0.55 + 1.0)).abs() < 1e-12);
        assert!((s.interpolate(2.0).unwrap() - 7.0).abs() < 1e-12);
        assert!(s.interpolate(2.5).is_err());
        assert!(s.interpolate(-0.5).is_err());
    }
}
