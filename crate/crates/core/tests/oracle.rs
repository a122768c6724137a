mod common;

use num_complex::Complex64;

use galispin_core::oracle::{
    exchange_selection_rule, grid_bound_state, ls_phase_shift, momentum_grid, trial_even,
    trial_odd, GridScheme, GridSpec, OracleError,
};
use galispin_core::quadrature::QuadratureConfig;
use galispin_core::two_body::{phase_shift, solve_bound_state};
use galispin_core::{FormFactor, FormFactorFamily, Normalization};

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn spec(n: usize, q_max: f64, scheme: GridScheme) -> GridSpec {
    GridSpec {
        n_points: n,
        q_max,
        scheme,
    }
}

fn strong(fam: FormFactorFamily) -> galispin_core::ModelParams {
    let crit = 3.0 / FormFactor::new(fam, 1.0).norm_sq_integral();
    common::params(fam, 1.0, 1.0, 1.5 * crit / 2.0, 1)
}

#[test]
fn grid_weights_integrate_smooth_functions() {
    // Both schemes must integrate q^2 exp(-q) on [0, q_max] well.
    let ff = FormFactor::new(FormFactorFamily::Gaussian, 1.0);
    let exact = |b: f64| {
        // int_0^b q^2 e^-q dq = 2 - e^-b (b^2 + 2b + 2)
        2.0 - (-b).exp() * (b * b + 2.0 * b + 2.0)
    };
    for scheme in [GridScheme::GaussLegendreMapped, GridScheme::Uniform] {
        let s = spec(201, 8.0, scheme);
        let (nodes, weights) = momentum_grid(&s, &ff).expect("valid grid");
        assert_eq!(nodes.len(), 201);
        let acc: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(q, w)| w * q * q * (-q).exp())
            .sum();
        assert!(
            (acc - exact(8.0)).abs() < 1e-6,
            "{scheme:?}: {acc} vs {}",
            exact(8.0)
        );
        // Nodes ordered and inside the domain.
        for w in nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert!(*nodes.last().unwrap() <= 8.0 + 1e-12);
    }
}

#[test]
fn grid_validation_names_the_problem() {
    let sharp = FormFactor::new(FormFactorFamily::SharpCutoff, 1.0);
    let soft = FormFactor::new(FormFactorFamily::Gaussian, 1.0);
    assert!(matches!(
        momentum_grid(&spec(8, 1.0, GridScheme::GaussLegendreMapped), &sharp),
        Err(OracleError::Grid(m)) if m.contains("at least 16")
    ));
    assert!(matches!(
        momentum_grid(&spec(100, 2.0, GridScheme::GaussLegendreMapped), &sharp),
        Err(OracleError::Grid(m)) if m.contains("equal the cutoff")
    ));
    assert!(matches!(
        momentum_grid(&spec(100, 3.0, GridScheme::GaussLegendreMapped), &soft),
        Err(OracleError::Grid(m)) if m.contains("five cutoffs")
    ));
    assert!(matches!(
        momentum_grid(&spec(100, 8.0, GridScheme::Uniform), &soft),
        Err(OracleError::Grid(m)) if m.contains("odd number")
    ));
}

#[test]
fn ls_zero_coupling_is_exact() {
    let params = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, 0.0, 1);
    let r = ls_phase_shift(
        &params,
        0.3,
        &spec(100, 1.0, GridScheme::GaussLegendreMapped),
        &cfg(),
    )
    .expect("solvable");
    assert_eq!(r.oracle_value, 0.0);
    assert_eq!(r.analytic_value, 0.0);
    assert_eq!(r.abs_diff, 0.0);
}

#[test]
fn ls_matches_analytic_sharp() {
    let params = strong(FormFactorFamily::SharpCutoff);
    let s = spec(200, 1.0, GridScheme::GaussLegendreMapped);
    for k in [0.2, 0.45, 0.7] {
        let r = ls_phase_shift(&params, k, &s, &cfg()).expect("solvable");
        assert!(
            r.abs_diff <= 1e-4,
            "k {k}: oracle {} analytic {} diff {}",
            r.oracle_value,
            r.analytic_value,
            r.abs_diff
        );
    }
}

#[test]
fn ls_matches_analytic_gaussian() {
    let params = strong(FormFactorFamily::Gaussian);
    let s = spec(200, 6.0, GridScheme::GaussLegendreMapped);
    for k in [0.2, 0.45, 0.7] {
        let r = ls_phase_shift(&params, k, &s, &cfg()).expect("solvable");
        assert!(
            r.abs_diff <= 1e-4,
            "k {k}: oracle {} analytic {} diff {}",
            r.oracle_value,
            r.analytic_value,
            r.abs_diff
        );
    }
}

#[test]
fn ls_matches_analytic_rational() {
    // The q^-2 integrand tail forces a deep grid; the rational map reaches
    // it with the same 200 points.
    let params = strong(FormFactorFamily::Rational);
    let s = spec(200, 5e4, GridScheme::GaussLegendreMapped);
    for k in [0.2, 0.45, 0.7] {
        let r = ls_phase_shift(&params, k, &s, &cfg()).expect("solvable");
        assert!(
            r.abs_diff <= 1e-4,
            "k {k}: oracle {} analytic {} diff {}",
            r.oracle_value,
            r.analytic_value,
            r.abs_diff
        );
    }
}

#[test]
fn ls_adjudicates_the_unitary_amplitude() {
    // The grid solver pins both the phase and the amplitude magnitude;
    // only the unitary normalization reproduces  t = e^{i delta} sin(delta).
    let params = strong(FormFactorFamily::Gaussian);
    let k = 0.45;
    let r = ls_phase_shift(&params, k, &spec(200, 6.0, GridScheme::GaussLegendreMapped), &cfg())
        .expect("solvable");
    let t_oracle = Complex64::from_polar(r.oracle_value.sin(), r.oracle_value);
    let t_u = phase_shift(&params, k, Normalization::Unitary, &cfg())
        .unwrap()
        .t_matrix;
    let t_b = phase_shift(&params, k, Normalization::Bare, &cfg())
        .unwrap()
        .t_matrix;
    assert!((t_oracle - t_u).norm() <= 1e-4);
    assert!((t_oracle - t_b).norm() > 1.0);
}

#[test]
fn ls_sharp_discrete_kernel_is_polynomial_exact() {
    // With a flat regulator the subtracted kernel is a cubic plus the exact
    // principal-value constant, so composite Simpson leaves no error at all.
    let params = strong(FormFactorFamily::SharpCutoff);
    let r = ls_phase_shift(&params, 0.437, &spec(101, 1.0, GridScheme::Uniform), &cfg())
        .expect("solvable");
    assert!(r.abs_diff <= 1e-12, "diff {}", r.abs_diff);
}

#[test]
fn ls_uniform_refinement_is_high_order() {
    // The gaussian regulator leaves real composite-rule error to study.
    let params = strong(FormFactorFamily::Gaussian);
    let k = 0.437;
    let mut errs = Vec::new();
    for n in [101usize, 201] {
        let r = ls_phase_shift(&params, k, &spec(n, 6.0, GridScheme::Uniform), &cfg())
            .expect("solvable");
        errs.push(r.abs_diff);
    }
    let ratio = errs[0] / errs[1].max(1e-300);
    assert!(
        ratio >= 4.0,
        "halving the step gained only x{ratio}: errs {errs:?}"
    );
}

#[test]
fn ls_rejects_momentum_on_a_node() {
    let params = strong(FormFactorFamily::SharpCutoff);
    let r = ls_phase_shift(&params, 0.5, &spec(101, 1.0, GridScheme::Uniform), &cfg());
    assert!(matches!(
        r,
        Err(OracleError::Grid(m)) if m.contains("collides")
    ));
}

#[test]
fn grid_bound_state_matches_solver() {
    let lam_eff = common::lambda_eff_for_kappa(1.0, 1.0, 0.5);
    let params = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, lam_eff / 2.0, 1);
    let r = grid_bound_state(
        &params,
        &spec(400, 1.0, GridScheme::GaussLegendreMapped),
        &cfg(),
    )
    .expect("bound on grid");
    let rel = r.report.abs_diff / r.report.analytic_value.abs();
    assert!(
        rel <= 1e-3,
        "grid {} vs analytic {}: rel {rel}",
        r.report.oracle_value,
        r.report.analytic_value
    );
    assert!(r.grid_margin > 0.0);
}

#[test]
fn grid_hamiltonian_has_exactly_one_level() {
    let lam_eff = common::lambda_eff_for_kappa(1.0, 1.0, 0.5);
    let params = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, lam_eff / 2.0, 1);
    let r = grid_bound_state(
        &params,
        &spec(60, 1.0, GridScheme::GaussLegendreMapped),
        &cfg(),
    )
    .expect("bound on grid");
    assert_eq!(r.negative_levels, 1);
    let gap = r.jacobi_gap.expect("dense cross-check on small grid");
    assert!(gap <= 1e-8, "secular root vs dense eigenvalue gap {gap}");
}

#[test]
fn grid_bound_state_converges_under_refinement() {
    let params = strong(FormFactorFamily::Gaussian);
    let analytic = solve_bound_state(&params, 1e-13, &cfg()).unwrap().omega;
    let mut errs = Vec::new();
    for n in [51usize, 101, 201] {
        let r = grid_bound_state(&params, &spec(n, 6.0, GridScheme::Uniform), &cfg())
            .expect("bound on grid");
        errs.push((r.report.oracle_value - analytic).abs());
    }
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "errs {errs:?}");
    let ratio = errs[1] / errs[2].max(1e-300);
    assert!(ratio >= 4.0, "refinement order too low: {errs:?}");
}

#[test]
fn grid_bound_state_absent_below_threshold() {
    let params = common::params(FormFactorFamily::Gaussian, 1.0, 1.0, 1.0, 1);
    let r = grid_bound_state(
        &params,
        &spec(100, 6.0, GridScheme::GaussLegendreMapped),
        &cfg(),
    );
    assert!(matches!(
        r,
        Err(OracleError::Solver(m)) if m.contains("no bound state")
    ));
}

#[test]
fn exchange_even_trial_cancels_identically() {
    for two_s in 1..=4u32 {
        let r = exchange_selection_rule(two_s, trial_even, 48, 4.0).expect("supported");
        assert_eq!(r.max_amplitude, 0.0, "two_s {two_s}");
        assert_eq!(r.matrix_element, 0.0);
        assert_eq!(r.scalar_matrix_element, 0.0);
        assert_eq!(r.max_imag, 0.0);
        for &p in &r.profile {
            assert_eq!(p, 0.0);
        }
    }
}

#[test]
fn exchange_odd_trial_survives_spin_blind() {
    let mut profiles: Vec<Vec<f64>> = Vec::new();
    let mut elements = Vec::new();
    for two_s in [1u32, 2, 3] {
        let r = exchange_selection_rule(two_s, trial_odd, 48, 4.0).expect("supported");
        assert!(r.matrix_element != 0.0, "two_s {two_s}");
        assert!(r.max_amplitude > 0.0);
        // Spin contraction equals the spinless two-mode model exactly.
        assert_eq!(r.abs_diff, 0.0, "two_s {two_s}");
        assert_eq!(r.max_imag, 0.0);
        // Signs: transpose parity alternates, commutation sign compensates.
        let expect_t = if two_s % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(r.transpose_sign, expect_t);
        assert_eq!(r.exchange_sign * r.transpose_sign, -1.0);
        profiles.push(r.profile.clone());
        elements.push(r.matrix_element);
    }
    // Identical surviving profile for every spin, bit for bit.
    assert_eq!(profiles[0], profiles[1]);
    assert_eq!(profiles[0], profiles[2]);
    assert_eq!(elements[0], elements[1]);
    assert_eq!(elements[0], elements[2]);
}

#[test]
fn exchange_keeps_only_the_odd_projection() {
    // A trial with both parities: the surviving profile is its odd part.
    let trial = |xi: f64| (-0.5 * (xi - 0.3) * (xi - 0.3)).exp();
    let r = exchange_selection_rule(2, trial, 32, 3.0).expect("supported");
    for (i, &xi) in r.grid.iter().enumerate() {
        let odd = (trial(xi) - trial(-xi)) / 2.0;
        assert_eq!(r.profile[i], odd, "xi {xi}");
    }
    assert_eq!(
        r.matrix_element, r.scalar_matrix_element,
        "spin contraction must match the two-mode model"
    );
}

#[test]
fn exchange_guards_reject_bad_input() {
    assert!(matches!(
        exchange_selection_rule(9, trial_odd, 16, 3.0),
        Err(OracleError::Grid(m)) if m.contains("two_s <= 8")
    ));
    assert!(matches!(
        exchange_selection_rule(2, trial_odd, 3, 3.0),
        Err(OracleError::Grid(_))
    ));
    assert!(exchange_selection_rule(2, trial_odd, 16, -1.0).is_err());
}

#[test]
fn exchange_summary_reports_selection_rule() {
    let r = exchange_selection_rule(1, trial_odd, 24, 3.0).expect("supported");
    let s = r.summary();
    assert_eq!(s.oracle_value, r.matrix_element);
    assert_eq!(s.analytic_value, r.scalar_matrix_element);
    assert_eq!(s.abs_diff, 0.0);
}
