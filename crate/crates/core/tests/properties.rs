use chainlab_core::bifurcation::{quantize, sweep_cell, Cell};
use chainlab_core::causality::{interventional_shift, ShiftSpec};
use chainlab_core::{
    attractor_census, simulate, step_coupled_lde, step_lde, step_logistic_map, sweep, Chain,
    ChainParams, ChainState, ParamRule, SweepSpec,
};
use proptest::prelude::*;

fn positive_params() -> impl Strategy<Value = ChainParams> {
    (
        0.05..3.0f64,
        0.05..3.0f64,
        0.2..2.0f64,
        0.2..2.0f64,
        -0.5..0.5f64,
        -0.5..0.5f64,
    )
        .prop_map(|(r_x, r_y, k_x, k_y, a_yx, a_xy)| {
            ChainParams::new(r_x, r_y, k_x, k_y, a_yx, a_xy).unwrap()
        })
}

fn small_sweep(r_min: f64, r_max: f64, n_r: usize, n_keep: usize) -> SweepSpec {
    SweepSpec {
        r_min,
        r_max,
        n_r,
        n_burn: 300,
        n_keep,
        ..SweepSpec::default()
    }
}

proptest! {
    #[test]
    fn interior_fixed_point_is_invariant(p in positive_params()) {
        if let Some((x, y)) = p.interior_fixed_point() {
            let next = step_coupled_lde(&ChainState::new(x, y), &p).unwrap();
            prop_assert!((next.x - x).abs() <= 1e-13 * x.max(1.0));
            prop_assert!((next.y - y).abs() <= 1e-13 * y.max(1.0));
        }
    }

    #[test]
    fn decoupled_step_equals_two_single_steps(
        x in 0.0..3.0f64, y in 0.0..3.0f64,
        r_x in 0.05..3.0f64, r_y in 0.05..3.0f64,
        k_x in 0.2..2.0f64, k_y in 0.2..2.0f64,
    ) {
        let p = ChainParams::new(r_x, r_y, k_x, k_y, 0.0, 0.0).unwrap();
        let next = step_coupled_lde(&ChainState::new(x, y), &p).unwrap();
        prop_assert_eq!(next.x.to_bits(), step_lde(x, r_x, k_x).unwrap().to_bits());
        prop_assert_eq!(next.y.to_bits(), step_lde(y, r_y, k_y).unwrap().to_bits());
        prop_assert_eq!(next.n, 1);
    }

    #[test]
    fn non_negative_inputs_stay_non_negative(
        p in positive_params(), x in 0.0..50.0f64, y in 0.0..50.0f64,
    ) {
        if let Ok(next) = step_coupled_lde(&ChainState::new(x, y), &p) {
            prop_assert!(next.x >= 0.0 && next.y >= 0.0);
        }
    }

    #[test]
    fn trajectories_are_deterministic(p in positive_params(), x in 0.01..2.0f64, y in 0.01..2.0f64) {
        let a = simulate(ChainState::new(x, y), &p, 300);
        let b = simulate(ChainState::new(x, y), &p, 300);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(&a, &b);
                prop_assert!(a.states.iter().enumerate().all(|(i, s)| s.n == i));
                prop_assert_eq!(a.regenerate().unwrap(), a);
            }
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "runs disagree on divergence"),
        }
    }

    /// `x exp(z)` with `z = r (K - x)` against its linearization, written as
    /// the logistic map `R u (1 - u)` with `R = 1 + rK` and `u = r x / R`.
    #[test]
    fn lde_matches_rescaled_logistic_map_to_second_order(
        r in 1e-4..0.5f64, k in 0.5..1.5f64, x in 0.0..2.0f64,
    ) {
        let big_r = 1.0 + r * k;
        let u = r * x / big_r;
        let logistic = step_logistic_map(u, big_r).unwrap() * big_r / r;
        let z = r * (k - x);
        let bound = 0.5 * x * z * z * z.abs().exp() + 1e-14;
        prop_assert!((step_lde(x, r, k).unwrap() - logistic).abs() <= bound);
    }

    #[test]
    fn recorded_levels_are_multiples_of_epsilon(r in 1.5..3.0f64, exp in 2..6i32) {
        let spec = SweepSpec { epsilon: 10f64.powi(-exp), ..small_sweep(1.5, 3.0, 2, 100) };
        let cell = sweep_cell(&spec, r, ChainState::new(0.5, 0.5));
        for &q in cell.x.iter().chain(&cell.y) {
            let v = q as f64 * spec.epsilon;
            prop_assert_eq!(quantize(v, spec.epsilon), q);
            prop_assert!((v - spec.epsilon * (v / spec.epsilon).round()).abs() <= 1e-12 * v.abs().max(1.0));
        }
    }

    #[test]
    fn doubling_n_keep_never_lowers_a_census(r in 1.5..3.0f64) {
        let short = sweep_cell(&small_sweep(1.5, 3.0, 2, 100), r, ChainState::new(0.5, 0.5));
        let long = sweep_cell(&small_sweep(1.5, 3.0, 2, 200), r, ChainState::new(0.5, 0.5));
        prop_assert!(short.x.is_subset(&long.x) && short.y.is_subset(&long.y));
        prop_assert!(long.x.len() >= short.x.len() && long.y.len() >= short.y.len());
    }

    #[test]
    fn clamping_the_undriven_side_never_shifts_y(
        r in 0.5..3.0f64, a_yx in -0.5..0.5f64, clamp in 0.1..2.0f64,
    ) {
        let p = ChainParams { a_yx, ..ChainParams::unidirectional(r) };
        let spec = ShiftSpec { clamp_values: vec![clamp], n_steps: 10_000, burn_in: 500, epsilon: 1e-2 };
        if let Ok(s) = interventional_shift(&p, Chain::X, Chain::Y, ChainState::new(0.5, 0.5), &spec) {
            prop_assert_eq!(s.shift, 0.0);
        }
    }
}

#[test]
fn cell_order_and_thread_count_do_not_matter() {
    let spec = small_sweep(1.5, 3.0, 300, 200);
    let initial = ChainState::new(0.5, 0.5);
    let parallel = sweep(&spec, initial).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| sweep(&spec, initial).unwrap());
    assert_eq!(parallel, single);
    let reversed: Vec<Cell> = parallel
        .r
        .iter()
        .rev()
        .map(|&r| sweep_cell(&spec, r, initial))
        .collect();
    assert!(reversed.iter().rev().eq(parallel.cells.iter()));
}

#[test]
fn fixed_point_regime_has_census_one() {
    let spec = SweepSpec {
        param_rule: ParamRule::default(),
        ..small_sweep(1.5, 1.85, 60, 200)
    };
    let spec = SweepSpec {
        n_burn: 2000,
        ..spec
    };
    let census = attractor_census(&sweep(&spec, ChainState::new(0.5, 0.5)).unwrap());
    assert!(
        census.iter().all(|c| c.x == 1 && c.y == 1 && !c.diverged),
        "{census:?}"
    );
}

#[test]
fn stability_predicate_on_a_coarse_grid() {
    for i in 1..=20 {
        let r = 0.15 * i as f64;
        for j in 1..=10 {
            let k = 0.5 + 0.1 * j as f64;
            let rk = r * k;
            if (rk - 2.0).abs() < 0.05 {
                continue;
            }
            let t = simulate(
                ChainState::new(0.4, 0.4),
                &ChainParams::uncoupled(r, k),
                5000,
            )
            .unwrap();
            let converged = (t.last().x - k).abs() < 1e-8;
            assert_eq!(converged, rk < 2.0, "r={r}, K={k}");
        }
    }
}
