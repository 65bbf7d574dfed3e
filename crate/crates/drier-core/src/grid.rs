//! Uniform space-time grid shared by every solver.

use crate::error::{ModelError, Result};

/// Uniform 1-D spatial grid on [0, length] plus uniform time grid on [0, horizon].
///
/// Spatial nodes sit at x_i = i*dx for i = 0..=n_cells (inlet node included);
/// time samples at t_n = n*dt for n = 0..=n_steps. Lengths are in metres, the
/// time unit is whatever the scenario declares (minutes throughout this crate).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeGrid {
    n_cells: usize,
    dx: f64,
    length: f64,
    dt: f64,
    n_steps: usize,
    horizon: f64,
}

/// Outcome of validating the explicit-scheme stability bound for one velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CflCheck {
    pub u0: f64,
    pub dt: f64,
    pub dx: f64,
    /// True iff u0*dt < dx.
    pub admissible: bool,
}

impl SpaceTimeGrid {
    /// Build a grid from cell and step counts; dx and dt are derived exactly.
    pub fn new(length: f64, n_cells: usize, horizon: f64, n_steps: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(ModelError::InvalidParameter(format!("length must be positive, got {length}")));
        }
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(ModelError::InvalidParameter(format!("horizon must be positive, got {horizon}")));
        }
        if n_cells == 0 || n_steps == 0 {
            return Err(ModelError::InvalidParameter("n_cells and n_steps must be positive".into()));
        }
        Ok(Self {
            n_cells,
            dx: length / n_cells as f64,
            length,
            dt: horizon / n_steps as f64,
            n_steps,
            horizon,
        })
    }

    /// Build a grid from a requested time step. The horizon must be an integer
    /// multiple of dt to within one rounding unit.
    pub fn with_dt(length: f64, n_cells: usize, horizon: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(ModelError::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        let steps = horizon / dt;
        let n_steps = steps.round() as usize;
        if n_steps == 0 || (steps - n_steps as f64).abs() > 1e-9 * steps.max(1.0) {
            return Err(ModelError::InvalidParameter(format!(
                "horizon {horizon} is not an integer multiple of dt {dt}"
            )));
        }
        Self::new(length, n_cells, horizon, n_steps)
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Number of spatial nodes, n_cells + 1.
    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of time samples, n_steps + 1.
    pub fn n_samples(&self) -> usize {
        self.n_steps + 1
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Stability check for the explicit upwind scheme against a given velocity.
    pub fn cfl_check(&self, u0: f64) -> CflCheck {
        CflCheck {
            u0,
            dt: self.dt,
            dx: self.dx,
            admissible: u0 * self.dt < self.dx,
        }
    }

    /// Error out unless u0*dt < dx and the grid has at least three nodes.
    pub fn require_cfl(&self, u0: f64) -> Result<()> {
        if self.n_nodes() < 3 {
            return Err(ModelError::TooFewNodes { nodes: self.n_nodes() });
        }
        let check = self.cfl_check(u0);
        if !check.admissible {
            return Err(ModelError::CflViolation {
                u0,
                dt: self.dt,
                dx: self.dx,
                product: u0 * self.dt,
            });
        }
        Ok(())
    }
}
