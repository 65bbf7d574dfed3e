//! Upwind difference kernels for rightward transport (u0 > 0) and their
//! adjoint counterparts.
//!
//! Interior nodes use the second-order one-sided stencil
//! (3 f_i - 4 f_{i-1} + f_{i-2}) / (2 dx); the node next to the inlet falls
//! back to first order (f_1 - f_0) / dx because it has no i-2 neighbour. The
//! inlet node itself is a boundary value and is never advanced.

use crate::error::Result;
use crate::field::ScalarField;
use crate::grid::SpaceTimeGrid;

/// Write the upwind spatial derivative of `values` into `out`.
///
/// `out[0]` is set to zero (boundary node, not advanced by the scheme).
pub fn upwind_derivative_into(values: &[f64], dx: f64, out: &mut [f64]) {
    debug_assert_eq!(values.len(), out.len());
    debug_assert!(values.len() >= 3);
    let inv_dx = 1.0 / dx;
    let inv_2dx = 0.5 * inv_dx;
    out[0] = 0.0;
    out[1] = (values[1] - values[0]) * inv_dx;
    for i in 2..values.len() {
        out[i] = (3.0 * values[i] - 4.0 * values[i - 1] + values[i - 2]) * inv_2dx;
    }
}

/// Adjoint (transpose) of `upwind_derivative_into` with respect to the
/// standard dot product: out[j] = sum_i D[i][j] * lam[i].
///
/// Seen from the multiplier side this is a mirrored upwind stencil biased
/// toward larger i, with a reduced closure at the two outlet-side nodes.
pub fn upwind_derivative_transpose_into(lam: &[f64], dx: f64, out: &mut [f64]) {
    debug_assert_eq!(lam.len(), out.len());
    debug_assert!(lam.len() >= 3);
    let n = lam.len() - 1;
    let inv_dx = 1.0 / dx;
    let inv_2dx = 0.5 * inv_dx;
    // Column 0 gathers from the first-order row 1 and the second-order row 2.
    out[0] = -lam[1] * inv_dx + if n >= 2 { lam[2] * inv_2dx } else { 0.0 };
    // Column 1: row 1 (+1/dx), row 2 (-4/(2dx)), row 3 (+1/(2dx)).
    out[1] = lam[1] * inv_dx - 4.0 * lam[2] * inv_2dx + if n >= 3 { lam[3] * inv_2dx } else { 0.0 };
    for j in 2..=n {
        let mut acc = 3.0 * lam[j];
        if j < n {
            acc -= 4.0 * lam[j + 1];
        }
        if j + 2 <= n {
            acc += lam[j + 2];
        }
        out[j] = acc * inv_2dx;
    }
}

/// Upwind advective derivative of a field, validated against the CFL bound.
///
/// Returns the derivative d f / d x in upwind form; the caller applies it as
/// an explicit increment -u0 * dt * derivative. The inlet value must already
/// be imposed for the step being assembled.
pub fn upwind_advect(field: &ScalarField, u0: f64, dt: f64) -> Result<ScalarField> {
    let grid = *field.grid();
    require_advect_preconditions(&grid, u0, dt)?;
    let mut out = vec![0.0; field.values().len()];
    upwind_derivative_into(field.values(), grid.dx(), &mut out);
    ScalarField::new(grid, out)
}

pub(crate) fn require_advect_preconditions(grid: &SpaceTimeGrid, u0: f64, dt: f64) -> Result<()> {
    if grid.n_nodes() < 3 {
        return Err(crate::error::ModelError::TooFewNodes { nodes: grid.n_nodes() });
    }
    if !(u0 * dt < grid.dx()) {
        return Err(crate::error::ModelError::CflViolation {
            u0,
            dt,
            dx: grid.dx(),
            product: u0 * dt,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::SpaceTimeGrid;

    fn grid(n: usize) -> SpaceTimeGrid {
        SpaceTimeGrid::new(5.0, n, 1.0, 1000).unwrap()
    }

    #[test]
    fn constant_field_has_zero_derivative() {
        let g = grid(40);
        let f = ScalarField::constant(g, 7.25);
        let d = upwind_advect(&f, 1.0, g.dt()).unwrap();
        for (i, v) in d.values().iter().enumerate() {
            assert!(v.abs() < 1e-13, "node {i}: {v}");
        }
    }

    #[test]
    fn linear_field_is_exact_from_node_two() {
        let g = grid(40);
        let a = -2.3;
        let f = ScalarField::from_fn(g, |x| a * x + 0.5);
        let d = upwind_advect(&f, 1.0, g.dt()).unwrap();
        for i in 1..=g.n_cells() {
            assert!((d.values()[i] - a).abs() < 1e-12, "node {i}: {}", d.values()[i]);
        }
    }

    #[test]
    fn quadratic_field_is_exact_from_node_two() {
        let g = grid(40);
        let f = ScalarField::from_fn(g, |x| x * x);
        let d = upwind_advect(&f, 1.0, g.dt()).unwrap();
        for i in 2..=g.n_cells() {
            assert!((d.values()[i] - 2.0 * g.x(i)).abs() < 1e-11);
        }
    }

    #[test]
    fn cfl_and_node_count_preconditions() {
        let g = grid(40);
        let f = ScalarField::constant(g, 1.0);
        assert!(upwind_advect(&f, 1e6, g.dt()).is_err());
        let tiny = SpaceTimeGrid::new(1.0, 1, 1.0, 10).unwrap();
        let f2 = ScalarField::constant(tiny, 1.0);
        assert!(upwind_advect(&f2, 0.1, tiny.dt()).is_err());
    }

    #[test]
    fn transpose_matches_dense_transpose() {
        // <D f, lam> == <f, D^T lam> for arbitrary vectors.
        let g = grid(17);
        let n = g.n_nodes();
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() + 0.3).collect();
        let lam: Vec<f64> = (0..n).map(|i| (i as f64 * 1.3).cos() - 0.1).collect();
        let mut df = vec![0.0; n];
        upwind_derivative_into(&f, g.dx(), &mut df);
        let mut dtl = vec![0.0; n];
        upwind_derivative_transpose_into(&lam, g.dx(), &mut dtl);
        let lhs: f64 = df.iter().zip(&lam).map(|(a, b)| a * b).sum();
        let rhs: f64 = f.iter().zip(&dtl).map(|(a, b)| a * b).sum();
        assert!(
            (lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0),
            "lhs {lhs} rhs {rhs}"
        );
    }
}
