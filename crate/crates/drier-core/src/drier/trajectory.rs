//! Space-time trajectory of the drier state, with CSV export and a compact
//! versioned binary dump for adjoint replay.

use crate::drier::DrierState;
use crate::error::{ModelError, Result};
use crate::field::{ScalarField, TimeSeries};
use crate::grid::SpaceTimeGrid;
use std::io::{Read, Write};
use std::path::Path;

const DUMP_MAGIC: &[u8; 4] = b"DRTJ";
const DUMP_VERSION: u32 = 1;

/// Full (eps_s, eps_l, T) history on the grid, stored as three flat
/// time-major planes of (n_steps + 1) x (n_cells + 1) values.
#[derive(Debug, Clone, PartialEq)]
pub struct DrierTrajectory {
    grid: SpaceTimeGrid,
    eps_s: Vec<f64>,
    eps_l: Vec<f64>,
    temperature: Vec<f64>,
}

impl DrierTrajectory {
    pub fn with_capacity(grid: SpaceTimeGrid) -> Self {
        let len = grid.n_samples() * grid.n_nodes();
        Self {
            grid,
            eps_s: Vec::with_capacity(len),
            eps_l: Vec::with_capacity(len),
            temperature: Vec::with_capacity(len),
        }
    }

    pub fn grid(&self) -> &SpaceTimeGrid {
        &self.grid
    }

    pub(crate) fn push_slice(&mut self, eps_s: &[f64], eps_l: &[f64], temperature: &[f64]) {
        self.eps_s.extend_from_slice(eps_s);
        self.eps_l.extend_from_slice(eps_l);
        self.temperature.extend_from_slice(temperature);
    }

    fn range(&self, level: usize) -> std::ops::Range<usize> {
        let nn = self.grid.n_nodes();
        level * nn..(level + 1) * nn
    }

    pub fn eps_s_slice(&self, level: usize) -> &[f64] {
        &self.eps_s[self.range(level)]
    }

    pub fn eps_l_slice(&self, level: usize) -> &[f64] {
        &self.eps_l[self.range(level)]
    }

    pub fn temperature_slice(&self, level: usize) -> &[f64] {
        &self.temperature[self.range(level)]
    }

    pub fn state_at(&self, level: usize) -> DrierState {
        DrierState {
            eps_s: ScalarField::new(self.grid, self.eps_s_slice(level).to_vec()).expect("slice matches grid"),
            eps_l: ScalarField::new(self.grid, self.eps_l_slice(level).to_vec()).expect("slice matches grid"),
            temperature: ScalarField::new(self.grid, self.temperature_slice(level).to_vec())
                .expect("slice matches grid"),
        }
    }

    pub fn final_state(&self) -> DrierState {
        self.state_at(self.grid.n_steps())
    }

    /// Outlet temperature series T(length, t).
    pub fn outlet_temperature(&self) -> TimeSeries {
        let last = self.grid.n_cells();
        let nn = self.grid.n_nodes();
        let values = (0..self.grid.n_samples()).map(|n| self.temperature[n * nn + last]).collect();
        TimeSeries::new(self.grid, values).expect("levels match grid")
    }

    /// Outlet moisture content X(length, t) = eps_l/eps_s at the outlet node.
    pub fn outlet_moisture(&self) -> TimeSeries {
        let last = self.grid.n_cells();
        let nn = self.grid.n_nodes();
        let values = (0..self.grid.n_samples())
            .map(|n| self.eps_l[n * nn + last] / self.eps_s[n * nn + last])
            .collect();
        TimeSeries::new(self.grid, values).expect("levels match grid")
    }
}

/// Write the versioned binary dump: header (magic, version, N, n_steps, dt,
/// dx) followed by the three planes per time level, little-endian f64.
pub fn write_trajectory_dump(trajectory: &DrierTrajectory, mut out: impl Write) -> Result<()> {
    let g = trajectory.grid;
    out.write_all(DUMP_MAGIC)?;
    out.write_all(&DUMP_VERSION.to_le_bytes())?;
    out.write_all(&(g.n_cells() as u32).to_le_bytes())?;
    out.write_all(&(g.n_steps() as u32).to_le_bytes())?;
    out.write_all(&g.dt().to_le_bytes())?;
    out.write_all(&g.dx().to_le_bytes())?;
    for level in 0..g.n_samples() {
        for plane in [
            trajectory.eps_s_slice(level),
            trajectory.eps_l_slice(level),
            trajectory.temperature_slice(level),
        ] {
            for v in plane {
                out.write_all(&v.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

/// Read a binary dump back into a full trajectory.
pub fn read_trajectory_dump(mut input: impl Read) -> Result<DrierTrajectory> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(ModelError::Io(format!("bad trajectory magic {magic:?}")));
    }
    let mut u32buf = [0u8; 4];
    input.read_exact(&mut u32buf)?;
    let version = u32::from_le_bytes(u32buf);
    if version != DUMP_VERSION {
        return Err(ModelError::Io(format!("unsupported trajectory dump version {version}")));
    }
    input.read_exact(&mut u32buf)?;
    let n_cells = u32::from_le_bytes(u32buf) as usize;
    input.read_exact(&mut u32buf)?;
    let n_steps = u32::from_le_bytes(u32buf) as usize;
    let mut f64buf = [0u8; 8];
    input.read_exact(&mut f64buf)?;
    let dt = f64::from_le_bytes(f64buf);
    input.read_exact(&mut f64buf)?;
    let dx = f64::from_le_bytes(f64buf);
    let grid = SpaceTimeGrid::new(dx * n_cells as f64, n_cells, dt * n_steps as f64, n_steps)?;

    let mut trajectory = DrierTrajectory::with_capacity(grid);
    let nn = grid.n_nodes();
    let mut plane = vec![0.0f64; nn];
    for _ in 0..grid.n_samples() {
        let mut slices: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for s in slices.iter_mut() {
            for v in plane.iter_mut() {
                input.read_exact(&mut f64buf)?;
                *v = f64::from_le_bytes(f64buf);
            }
            *s = plane.clone();
        }
        trajectory.push_slice(&slices[0], &slices[1], &slices[2]);
    }
    Ok(trajectory)
}

pub fn write_trajectory_dump_file(trajectory: &DrierTrajectory, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_trajectory_dump(trajectory, std::io::BufWriter::new(file))
}

pub fn read_trajectory_dump_file(path: &Path) -> Result<DrierTrajectory> {
    let file = std::fs::File::open(path)?;
    read_trajectory_dump(std::io::BufReader::new(file))
}

/// CSV export with columns (t, x, eps_s, eps_l, T), one row per node per
/// time level.
pub fn write_trajectory_csv(trajectory: &DrierTrajectory, mut out: impl Write) -> Result<()> {
    let g = trajectory.grid;
    out.write_all(b"t,x,eps_s,eps_l,T\n")?;
    for n in 0..g.n_samples() {
        let (s, l, t) = (
            trajectory.eps_s_slice(n),
            trajectory.eps_l_slice(n),
            trajectory.temperature_slice(n),
        );
        for i in 0..g.n_nodes() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                g.t(n),
                g.x(i),
                s[i],
                l[i],
                t[i]
            )?;
        }
    }
    Ok(())
}
