mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakval_core::scenarios::hardy::{build_hardy, HardyCoefficients, IN_P_OUT_E};
use weakval_core::scenarios::spin::{spin_registry, SIGMA_X};
use weakval_core::strange::{
    grid_oracle_extremal, planar_postselection, solve_optimal_postselection, solve_optimal_postselection_with,
    two_level_construction, two_level_weak_value, Branch, Objective, PlanarGeometry, SolverOptions, Strangeness,
};
use weakval_core::{
    classify_strangeness, inner_product, projector_onto, spectral_decomposition, Complex64, Labels, Observable,
    StateVector, WeakError, XI_CEILING,
};

/// `<A> -/+ tan(xi) dA` for real psi and symmetric A.
fn closed_form_extrema(pre: &StateVector, a: &Observable, xi: f64) -> (f64, f64) {
    let mean = a.expectation(pre).unwrap();
    let second = a.apply(pre).unwrap().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let spread = (second - mean * mean).max(0.0).sqrt();
    (mean - xi.tan() * spread, mean + xi.tan() * spread)
}

fn sigma_x() -> Observable {
    spin_registry().into_iter().find(|o| o.name() == SIGMA_X).unwrap()
}

#[test]
fn rank_one_reproduces_planar_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for t in 0..60 {
        let l = Labels::indexed(2 + t % 4).unwrap();
        let pre = common::random_real_state(&mut rng, &l);
        let n = common::random_real_state(&mut rng, &l);
        let xi = rng.random_range(0.1..1.4);
        let a = projector_onto(&n);
        let planar = planar_postselection(&pre, &n, xi, Branch::Minus).unwrap();
        let solved = solve_optimal_postselection(&pre, &a, xi, Objective::Minimize).unwrap();
        assert!(solved.converged);
        assert!((solved.weak_value - planar.weak_value).abs() < 1e-8, "{} vs {}", solved.weak_value, planar.weak_value);
        let cos_theta = inner_product(&n, &pre).unwrap().re.abs();
        let g = PlanarGeometry { theta_n: cos_theta.acos(), xi };
        assert!((planar.weak_value - g.weak_value(Branch::Minus)).abs() < 1e-12);
        let maxed = solve_optimal_postselection(&pre, &a, xi, Objective::Maximize).unwrap();
        assert!((maxed.weak_value - g.weak_value(Branch::Plus)).abs() < 1e-8);
    }
}

#[test]
fn solver_is_stationary_and_on_cone() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for t in 0..60 {
        let l = Labels::indexed(2 + t % 7).unwrap();
        let pre = common::random_real_state(&mut rng, &l);
        let a = common::random_real_symmetric(&mut rng, "A", &l);
        let xi = rng.random_range(0.05..1.5);
        for objective in [Objective::Minimize, Objective::Maximize] {
            let r = solve_optimal_postselection(&pre, &a, xi, objective).unwrap();
            assert!(r.converged);
            assert!(r.stationarity_residual < 1e-8, "residual {}", r.stationarity_residual);
            assert!((inner_product(&r.phi, &pre).unwrap().re - xi.cos()).abs() < 1e-9);
            let (lo, hi) = closed_form_extrema(&pre, &a, xi);
            let want = if objective == Objective::Minimize { lo } else { hi };
            assert!((r.weak_value - want).abs() < 1e-8 * want.abs().max(1.0));
        }
    }
}

#[test]
fn multipliers_match_textbook_form() {
    // lambda = (E/c - W)/s^2, mu = (W - c E)/(c s^2) with W = <phi|A|psi>
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let l = Labels::indexed(4).unwrap();
    for _ in 0..20 {
        let pre = common::random_real_state(&mut rng, &l);
        let a = common::random_real_symmetric(&mut rng, "A", &l);
        let xi = rng.random_range(0.3..1.3);
        let r = solve_optimal_postselection(&pre, &a, xi, Objective::Minimize).unwrap();
        let (c, s) = (xi.cos(), xi.sin());
        let e = a.expectation(&pre).unwrap();
        let w = a.sandwich(&r.phi, &pre).unwrap().re;
        assert!((r.lambda - (e / c - w) / (s * s)).abs() < 1e-9);
        assert!((r.mu - (w - c * e) / (c * s * s)).abs() < 1e-9);
    }
}

#[test]
fn sigma_x_matches_grid_oracle() {
    let l = Labels::new(["0", "1"]).unwrap();
    let pre = StateVector::basis(&l, 0).unwrap();
    let a = sigma_x();
    let solved = solve_optimal_postselection(&pre, &a, FRAC_PI_3, Objective::Minimize).unwrap();
    let oracle = grid_oracle_extremal(&pre, &a, FRAC_PI_3, 2000, Objective::Minimize).unwrap();
    assert!((solved.weak_value - oracle.value).abs() < 1e-6);
    assert!((solved.weak_value + 3f64.sqrt()).abs() < 1e-10);
    assert_eq!(oracle.evaluated, 2);
}

#[test]
fn hardy_projector_matches_oracle_and_planar() {
    let s = build_hardy(&HardyCoefficients::standard()).unwrap();
    let a = s.observable(IN_P_OUT_E).unwrap();
    let solved = solve_optimal_postselection(&s.pre_state, a, FRAC_PI_3, Objective::Minimize).unwrap();
    let oracle = grid_oracle_extremal(&s.pre_state, a, FRAC_PI_3, 2000, Objective::Minimize).unwrap();
    let cos_theta = 1.0 / 3f64.sqrt();
    let planar = (cos_theta.acos() + FRAC_PI_3).cos() * cos_theta / FRAC_PI_3.cos();
    assert!((solved.weak_value - planar).abs() < 1e-8);
    assert!((oracle.value - planar).abs() < 1e-6, "oracle {} vs {planar}", oracle.value);
    assert!(solved.weak_value <= oracle.value + 1e-6);
}

#[test]
fn oracle_convergence_and_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let l = Labels::indexed(3).unwrap();
    for _ in 0..5 {
        let pre = common::random_real_state(&mut rng, &l);
        let a = common::random_real_symmetric(&mut rng, "A", &l);
        let xi = rng.random_range(0.2..1.3);
        let coarse = grid_oracle_extremal(&pre, &a, xi, 2000, Objective::Minimize).unwrap();
        let fine = grid_oracle_extremal(&pre, &a, xi, 4000, Objective::Minimize).unwrap();
        assert!((coarse.value - fine.value).abs() < 1e-4);
        let solved = solve_optimal_postselection(&pre, &a, xi, Objective::Minimize).unwrap();
        assert!(solved.weak_value <= fine.value + 1e-6);
    }
}

#[test]
fn small_cone_collapses_to_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let l = Labels::indexed(3).unwrap();
    let pre = common::random_real_state(&mut rng, &l);
    let a = common::random_real_symmetric(&mut rng, "A", &l);
    let e = a.expectation(&pre).unwrap();
    let r = solve_optimal_postselection(&pre, &a, 1e-6, Objective::Minimize).unwrap();
    assert!((r.weak_value - e).abs() < 1e-5);
    assert!((inner_product(&r.phi, &pre).unwrap().re - 1.0).abs() < 1e-11);
}

#[test]
fn non_convergence_falls_back_to_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let l = Labels::indexed(3).unwrap();
    let pre = common::random_real_state(&mut rng, &l);
    let a = common::random_real_symmetric(&mut rng, "A", &l);
    let options = SolverOptions {
        max_iterations: 1,
        fallback_resolution: Some(400),
        ..SolverOptions::default()
    };
    let r = solve_optimal_postselection_with(&pre, &a, 0.8, Objective::Minimize, options).unwrap();
    assert!(!r.converged);
    let oracle = grid_oracle_extremal(&pre, &a, 0.8, 400, Objective::Minimize).unwrap();
    assert!((r.weak_value - oracle.value).abs() < 1e-12);
}

#[test]
fn xi_bounds() {
    let l = Labels::new(["0", "1"]).unwrap();
    let pre = StateVector::basis(&l, 0).unwrap();
    for xi in [0.0, -0.1, FRAC_PI_2, f64::NAN, XI_CEILING] {
        assert!(matches!(
            solve_optimal_postselection(&pre, &sigma_x(), xi, Objective::Minimize),
            Err(WeakError::XiOutOfRange { .. })
        ));
    }
    let msg = WeakError::XiOutOfRange { xi: 0.0, ceiling: XI_CEILING }.to_string();
    assert!(msg.starts_with("xi must be in (0, xi_ceiling)"));
}

#[test]
fn complex_scenarios_are_rejected() {
    let l = Labels::new(["0", "1"]).unwrap();
    let pre = StateVector::new(l, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
    assert!(matches!(
        solve_optimal_postselection(&pre, &sigma_x(), 0.5, Objective::Minimize),
        Err(WeakError::ComplexGeometry { .. })
    ));
}

#[test]
fn negativity_boundary_and_monotone_divergence() {
    for k in 1..20 {
        let theta = k as f64 * FRAC_PI_2 / 20.0;
        let boundary = PlanarGeometry { theta_n: theta, xi: FRAC_PI_2 - theta };
        assert!(boundary.weak_value(Branch::Minus).abs() < 1e-10);
        let mut previous = f64::INFINITY;
        for j in 1..=100 {
            let xi = (FRAC_PI_2 - theta) + (theta.min(XI_CEILING - (FRAC_PI_2 - theta))) * j as f64 / 101.0;
            let g = PlanarGeometry { theta_n: theta, xi };
            let w = g.weak_value(Branch::Minus);
            assert!(w < 0.0 && g.admits_negative());
            assert!(w < previous);
            previous = w;
        }
    }
}

#[test]
fn nonnegative_projector_weak_values_are_not_strange() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let mut seen = 0;
    for t in 0..400 {
        let l = Labels::indexed(2 + t % 3).unwrap();
        let pre = common::random_real_state(&mut rng, &l);
        let post = common::random_real_state(&mut rng, &l);
        let a = common::random_real_symmetric(&mut rng, "A", &l);
        let spectrum = spectral_decomposition(&a).unwrap();
        let ws: Vec<f64> = spectrum
            .eigenvectors
            .iter()
            .map(|n| weakval_core::weak_value(&pre, &post, &projector_onto(n)).unwrap().re)
            .collect();
        if ws.iter().all(|w| *w >= 0.0) {
            seen += 1;
            let w: f64 = ws.iter().zip(&spectrum.eigenvalues).map(|(w, a)| w * a).sum();
            assert_eq!(classify_strangeness(w, &spectrum).classification, Strangeness::Within);
        }
    }
    assert!(seen > 20);
}

#[test]
fn two_level_strangeness() {
    let a = sigma_x();
    let spectrum = spectral_decomposition(&a).unwrap();
    for ratio in [-3.0, -1.5, -1.01, -0.99, -0.5, 0.5, 2.0] {
        let w = two_level_weak_value(&a, &spectrum, ratio, 1.0).unwrap();
        // a_N + (a_1 - a_N) / (1 + ratio) with a_1 = -1, a_N = 1
        let oracle = 1.0 - 2.0 / (1.0 + ratio);
        assert!((w.re - oracle).abs() < 1e-10 * oracle.abs().max(1.0));
        let class = classify_strangeness(w.re, &spectrum).classification;
        assert_eq!(class == Strangeness::AboveMax, ratio < -1.0, "ratio {ratio}");
    }
    let (pre, post) = two_level_construction(&spectrum, -2.0, 1.0).unwrap();
    assert!(inner_product(&post, &pre).unwrap().norm() > 0.0);

    let sweep_max = (1..200)
        .map(|k| -1.2 + 0.2 * k as f64 / 200.0)
        .map(|r| two_level_weak_value(&a, &spectrum, r, 1.0).unwrap().re)
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(sweep_max > 10.0);
}
