//! Property tests over randomized model configurations.

use drier_core::control::{bb_minimize, BbOptions};
use drier_core::signal::Signal;
use drier_core::simple::{
    analytic_solution, exponential_relaxation_integral, SimpleModelParams,
};
use drier_core::stencil::upwind_advect;
use drier_core::{ScalarField, SpaceTimeGrid, TimeSeries};
use proptest::prelude::*;

fn params(k: f64, c: f64) -> SimpleModelParams {
    SimpleModelParams {
        u0: 1.0,
        k,
        length: 5.0,
        t_star: c,
        t_init: Signal::Constant(c),
        t_inlet: Signal::Constant(c),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// |T - q| decays monotonically along characteristics of the exact
    /// solution when the surroundings temperature is constant.
    #[test]
    fn damping_is_monotone_along_characteristics(
        k in 0.1f64..2.0,
        c in 20.0f64..150.0,
        q_const in 20.0f64..150.0,
        x0 in 0.2f64..2.0,
        step in 0.05f64..0.5,
    ) {
        let p = params(k, c);
        let grid = SpaceTimeGrid::new(5.0, 50, 10.0, 2000).unwrap();
        let q = TimeSeries::constant(grid, q_const);
        let mut previous = f64::INFINITY;
        // Walk the characteristic through (x0, 0) while it stays in the domain.
        let mut s = 0.0;
        while x0 + p.u0 * s <= p.length {
            let value = analytic_solution(&p, &q, x0 + p.u0 * s, s).unwrap();
            let gap = (value - q_const).abs();
            prop_assert!(gap <= previous * (1.0 + 1e-12) + 1e-12,
                "|T - q| grew from {previous} to {gap} at s = {s}");
            previous = gap;
            s += step;
        }
    }

    /// The two branches of the closed form agree on the characteristic when
    /// the initial and inlet data are compatible.
    #[test]
    fn branches_agree_on_the_characteristic(
        k in 0.1f64..2.0,
        mean in 50.0f64..150.0,
        amplitude in 0.0f64..20.0,
        omega in 0.5f64..8.0,
        x in 0.5f64..4.5,
    ) {
        let p = SimpleModelParams {
            u0: 1.0,
            k,
            length: 5.0,
            t_star: mean,
            t_init: Signal::Constant(mean),
            t_inlet: Signal::Sinusoid { mean, amplitude, omega, phase: 0.0 },
        };
        let grid = SpaceTimeGrid::new(5.0, 50, 10.0, 4000).unwrap();
        let q = TimeSeries::from_fn(grid, |t| mean + 0.5 * amplitude * (0.7 * omega * t).cos());
        let integral = exponential_relaxation_integral(p.k, &q);
        let t = x / p.u0;
        // init branch evaluated directly at the characteristic point
        let init_branch = p.t_init.value(0.0) * (-p.k * t).exp() + integral.eval(t).unwrap();
        let inlet_branch = analytic_solution(&p, &q, x, t).unwrap();
        prop_assert!((init_branch - inlet_branch).abs() < 1e-8,
            "branch gap {} at (x, t) = ({x}, {t})", init_branch - inlet_branch);
    }

    /// The upwind stencil differentiates affine fields exactly away from the
    /// inlet node.
    #[test]
    fn stencil_is_exact_on_affine_fields(
        slope in -10.0f64..10.0,
        offset in -50.0f64..50.0,
        n_cells in 8usize..120,
    ) {
        let grid = SpaceTimeGrid::new(5.0, n_cells, 1.0, 10_000).unwrap();
        let field = ScalarField::from_fn(grid, |x| slope * x + offset);
        let deriv = upwind_advect(&field, 1.0, grid.dt()).unwrap();
        for i in 1..=n_cells {
            prop_assert!((deriv.values()[i] - slope).abs() <= 1e-9 * slope.abs().max(1.0));
        }
    }

    /// On an isotropic quadratic the secant step is exactly the inverse
    /// curvature and the iteration lands on the minimizer.
    #[test]
    fn bb_is_exact_on_scalar_hessian_quadratics(
        x0 in prop::collection::vec(-50.0f64..50.0, 2..6),
        curvature in 0.1f64..20.0,
    ) {
        prop_assume!(x0.iter().any(|v| v.abs() > 1e-6));
        let opts = BbOptions { max_iters: 8, tol_cost: 0.0, tol_grad_rel: 1e-14, first_step_scale: 1e-3 };
        let initial_cost = 0.5 * curvature * x0.iter().map(|v| v * v).sum::<f64>();
        let out = bb_minimize(
            |x| Ok((
                0.5 * curvature * x.iter().map(|v| v * v).sum::<f64>(),
                x.iter().map(|v| curvature * v).collect(),
            )),
            x0,
            1.0,
            &opts,
        ).unwrap();
        // records: seed evaluation, seed step, exact secant step (iteration 2)
        prop_assert!(out.trace.len() >= 3, "only {} records", out.trace.len());
        let exact = &out.trace.records[2];
        prop_assert!((exact.step - 1.0 / curvature).abs() < 1e-9 / curvature,
            "secant step {} vs 1/curvature {}", exact.step, 1.0 / curvature);
        prop_assert!(exact.cost <= 1e-20 * initial_cost,
            "cost {} after the exact step (initial {initial_cost})", exact.cost);
    }
}
