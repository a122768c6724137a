mod common;

use core::f64::consts::PI;
use num_complex::Complex64;

use galispin_core::linalg::fit_line;
use galispin_core::quadrature::QuadratureConfig;
use galispin_core::two_body::{
    effective_range_closed_form, effective_range_fit, existence_margin, partial_wave_projection,
    phase_shift, position_wavefunction, scattering_amplitude, solve_bound_state,
    threshold_log_slope, TwoBodyError,
};
use galispin_core::{FormFactor, FormFactorFamily, ModelParams, Normalization};

const FAMILIES: [FormFactorFamily; 3] = [
    FormFactorFamily::SharpCutoff,
    FormFactorFamily::Gaussian,
    FormFactorFamily::Rational,
];

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

/// Coupling that puts the family's binding threshold at margin zero.
fn critical_effective(fam: FormFactorFamily) -> f64 {
    3.0 / FormFactor::new(fam, 1.0).norm_sq_integral()
}

fn family_params(fam: FormFactorFamily, lambda_eff: f64) -> ModelParams {
    // two_s = 1 doubles the bare coupling.
    common::params(fam, 1.0, 1.0, lambda_eff / 2.0, 1)
}

#[test]
fn worked_example_bound_state() {
    // Inverted eigenvalue condition at binding momentum 1/2.
    let lam_eff = common::lambda_eff_for_kappa(1.0, 1.0, 0.5);
    assert!(
        (lam_eff - 267.074587018709).abs() < 1e-9,
        "effective coupling drifted: {lam_eff}"
    );
    let params = family_params(FormFactorFamily::SharpCutoff, lam_eff);
    let state = solve_bound_state(&params, 1e-13, &cfg()).expect("bound state");
    assert!(
        (state.omega + 0.25).abs() <= 1e-10,
        "omega {} should be -1/4",
        state.omega
    );
    assert!((state.kappa - 0.5).abs() <= 2e-10);
    assert!(state.residual <= 1e-10, "residual {}", state.residual);
}

#[test]
fn existence_margin_matches_norm_closed_form() {
    for fam in FAMILIES {
        let n2 = common::n2_closed(fam, 1.0);
        for lam_eff in [10.0, 100.0, 400.0] {
            let params = family_params(fam, lam_eff);
            let margin = existence_margin(&params);
            let closed = lam_eff * n2 / 3.0 - 1.0;
            assert!(
                (margin - closed).abs() <= 1e-12 * closed.abs().max(1.0),
                "family {fam:?} lambda_eff {lam_eff}"
            );
        }
        // Margin changes sign exactly at the critical coupling.
        let crit = critical_effective(fam);
        assert!(existence_margin(&family_params(fam, crit * (1.0 - 1e-9))) < 0.0);
        assert!(existence_margin(&family_params(fam, crit * (1.0 + 1e-9))) > 0.0);
    }
}

#[test]
fn sharp_critical_coupling_value() {
    // 3 / (1/(6 pi^2)) = 18 pi^2.
    let crit = critical_effective(FormFactorFamily::SharpCutoff);
    assert!((crit - 18.0 * PI * PI).abs() < 1e-10);
}

#[test]
fn below_threshold_reports_margin() {
    let params = family_params(FormFactorFamily::Gaussian, 1.0);
    match solve_bound_state(&params, 1e-12, &cfg()) {
        Err(TwoBodyError::NoBoundState { margin }) => assert!(margin < 0.0),
        other => panic!("expected no bound state, got {other:?}"),
    }
}

#[test]
fn deeper_coupling_binds_deeper() {
    let crit = critical_effective(FormFactorFamily::Gaussian);
    let w1 = solve_bound_state(&family_params(FormFactorFamily::Gaussian, 1.5 * crit), 1e-12, &cfg())
        .unwrap()
        .omega;
    let w2 = solve_bound_state(&family_params(FormFactorFamily::Gaussian, 3.0 * crit), 1e-12, &cfg())
        .unwrap()
        .omega;
    assert!(w2 < w1 && w1 < 0.0);
}

#[test]
fn bound_state_residual_small_for_all_families() {
    for fam in FAMILIES {
        let crit = critical_effective(fam);
        for factor in [1.5, 3.0] {
            let params = family_params(fam, factor * crit);
            let state = solve_bound_state(&params, 1e-13, &cfg()).expect("bound state");
            assert!(state.omega < 0.0);
            assert!(
                state.residual <= 1e-8,
                "family {fam:?} x{factor}: residual {}",
                state.residual
            );
        }
    }
}

#[test]
fn spin_pairs_share_every_observable_bitwise() {
    // lambda * 2^two_s is invariant under (two_s, lambda) ->
    // (two_s + 2, lambda / 4), exactly in floating point.
    let lambda = 133.5372935093545;
    let base = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, lambda, 1);
    let partner = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, lambda / 4.0, 3);
    let far = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, lambda / 16.0, 5);
    assert_eq!(base.effective_coupling(), partner.effective_coupling());
    assert_eq!(base.effective_coupling(), far.effective_coupling());

    let w0 = solve_bound_state(&base, 1e-13, &cfg()).unwrap();
    let w1 = solve_bound_state(&partner, 1e-13, &cfg()).unwrap();
    let w2 = solve_bound_state(&far, 1e-13, &cfg()).unwrap();
    assert_eq!(w0.omega, w1.omega);
    assert_eq!(w0.omega, w2.omega);

    for i in 0..10 {
        let k = 0.08 + 0.09 * i as f64;
        let p0 = phase_shift(&base, k, Normalization::Unitary, &cfg()).unwrap();
        let p1 = phase_shift(&partner, k, Normalization::Unitary, &cfg()).unwrap();
        assert_eq!(p0.delta, p1.delta, "k {k}");
        assert_eq!(p0.t_matrix, p1.t_matrix, "k {k}");
    }
}

#[test]
fn unitary_phase_stays_on_the_circle() {
    for fam in FAMILIES {
        let params = family_params(fam, 1.5 * critical_effective(fam));
        for i in 0..10 {
            let k = 0.05 + 0.09 * i as f64;
            let p = phase_shift(&params, k, Normalization::Unitary, &cfg()).unwrap();
            assert!(
                p.unitarity_residual <= 1e-12,
                "family {fam:?} k {k}: residual {}",
                p.unitarity_residual
            );
            assert!((0.0..=1.0).contains(&p.sin_sq_delta));
            assert!(p.delta > -PI / 2.0 && p.delta <= PI / 2.0);
        }
    }
}

#[test]
fn bare_normalization_changes_magnitude_not_phase() {
    let params = family_params(FormFactorFamily::Gaussian, 1.5 * critical_effective(FormFactorFamily::Gaussian));
    for k in [0.2, 0.8, 1.4] {
        let u = phase_shift(&params, k, Normalization::Unitary, &cfg()).unwrap();
        let b = phase_shift(&params, k, Normalization::Bare, &cfg()).unwrap();
        // The numerator is a positive real scale: the phase is untouched.
        assert!((u.delta - b.delta).abs() <= 1e-13, "k {k}");
        // But the bare amplitude leaves the unitarity circle.
        assert!(b.unitarity_residual > 1e-3, "k {k}: {}", b.unitarity_residual);
        let ratio = b.t_matrix.norm() / u.t_matrix.norm();
        let expect = 4.0 * PI / params.form_factor.eval_sq(k);
        assert!((ratio - expect).abs() <= 1e-9 * expect, "k {k}");
    }
}

#[test]
fn zero_coupling_gives_zero_phase() {
    let params = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, 0.0, 1);
    let p = phase_shift(&params, 0.4, Normalization::Unitary, &cfg()).unwrap();
    assert_eq!(p.delta, 0.0);
    assert!(p.k3_cot_delta.is_infinite());
    assert_eq!(p.unitarity_residual, 0.0);
    match effective_range_fit(&params, 0.01, 0.1, 8, Normalization::Unitary, &cfg()) {
        Err(TwoBodyError::DegeneratePhase { .. }) => {}
        other => panic!("expected degenerate phase, got {other:?}"),
    }
}

#[test]
fn threshold_opening_is_cubic() {
    let params = family_params(FormFactorFamily::SharpCutoff, 1.0);
    let slope = threshold_log_slope(&params, 1e-3, 1e-2, Normalization::Unitary, &cfg()).unwrap();
    assert!(
        (slope - 3.0).abs() <= 0.01,
        "log-log slope {slope} should be 3"
    );
}

#[test]
fn weak_coupling_line_is_straight() {
    // Effective coupling 1: far from both the bound state and the cutoff,
    // where the expansion truncates cleanly.
    let params = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, 0.5, 1);
    let fit = effective_range_fit(&params, 0.01, 0.1, 40, Normalization::Unitary, &cfg()).unwrap();
    let c0 = -fit.er.inv_scattering_length;
    assert!(
        (c0 - 37.48689816497149).abs() <= 1e-6,
        "intercept drifted: {c0}"
    );
    assert!((fit.er.effective_range + 1.2616055).abs() <= 1e-4);
    assert!(
        fit.max_residual <= 1e-6 * c0.abs(),
        "residual {} vs budget {}",
        fit.max_residual,
        1e-6 * c0.abs()
    );
    // The residual is genuine quartic curvature, not noise.
    assert!(fit.max_residual >= 1e-9 * c0.abs());
    // Covariance block is symmetric with positive diagonal.
    let cov = fit.covariance;
    assert!(cov[0][0] >= 0.0 && cov[1][1] >= 0.0);
    assert!((cov[0][1] - cov[1][0]).abs() <= 1e-18 * cov[0][0].max(1.0));
}

#[test]
fn shallow_binding_matches_closed_form() {
    // Binding momentum 1/20 of the cutoff: the closed form and the
    // scattering-side fit agree to well under a percent on 1/a.
    let lam_eff = common::lambda_eff_for_kappa(1.0, 1.0, 0.05);
    assert!((lam_eff - 178.8925483674354).abs() < 1e-9);
    let params = family_params(FormFactorFamily::SharpCutoff, lam_eff);
    let closed = effective_range_closed_form(&params, 1e-13, &cfg()).unwrap();
    assert!(
        (closed.er.inv_scattering_length - 0.001474497250739669).abs() <= 1e-10,
        "closed 1/a {}",
        closed.er.inv_scattering_length
    );
    assert!(
        (closed.er.effective_range + 1.279597800591735).abs() <= 1e-8,
        "closed r0 {}",
        closed.er.effective_range
    );
    assert!(closed.zeta > 0.0);

    let fit = effective_range_fit(&params, 0.01, 0.1, 40, Normalization::Unitary, &cfg()).unwrap();
    let da = (fit.er.inv_scattering_length - closed.er.inv_scattering_length).abs()
        / closed.er.inv_scattering_length.abs();
    let dr = (fit.er.effective_range - closed.er.effective_range).abs()
        / closed.er.effective_range.abs();
    assert!(da <= 5e-3, "1/a deviation {da}");
    assert!(dr <= 2e-2, "r0 deviation {dr}");
}

#[test]
fn effective_range_scales_as_a_momentum() {
    // Doubling cutoff and binding momentum together scales 1/a by 8 and
    // r0 by 2; the coupling drops by exactly 8.
    let lam1 = common::lambda_eff_for_kappa(1.0, 1.0, 0.25);
    let lam2 = common::lambda_eff_for_kappa(1.0, 2.0, 0.5);
    assert!((lam2 - lam1 / 8.0).abs() <= 1e-12 * lam1);
    let p1 = common::params(FormFactorFamily::SharpCutoff, 1.0, 1.0, lam1 / 2.0, 1);
    let p2 = common::params(FormFactorFamily::SharpCutoff, 2.0, 1.0, lam2 / 2.0, 1);
    let c1 = effective_range_closed_form(&p1, 1e-14, &cfg()).unwrap();
    let c2 = effective_range_closed_form(&p2, 1e-14, &cfg()).unwrap();
    let ra = c2.er.inv_scattering_length / c1.er.inv_scattering_length;
    let rr = c2.er.effective_range / c1.er.effective_range;
    assert!((ra - 8.0).abs() <= 1e-7, "1/a ratio {ra}");
    assert!((rr - 2.0).abs() <= 1e-7, "r0 ratio {rr}");
}

#[test]
fn fit_recovers_synthetic_line_exactly() {
    let xs: Vec<f64> = (0..25).map(|i| 1e-4 + 3e-4 * i as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 3.7 - 0.9 * x).collect();
    let (c0, c1, max_resid, _) = fit_line(&xs, &ys);
    assert!((c0 - 3.7).abs() <= 1e-12);
    assert!((c1 + 0.9).abs() <= 1e-9);
    assert!(max_resid <= 1e-13);
}

#[test]
fn narrow_window_is_rejected() {
    let params = family_params(FormFactorFamily::SharpCutoff, 100.0);
    match effective_range_fit(&params, 0.05, 0.074, 8, Normalization::Unitary, &cfg()) {
        Err(TwoBodyError::IllConditionedFit { ratio, ratio_needed }) => {
            assert!(ratio < ratio_needed);
        }
        other => panic!("expected ill-conditioned fit, got {other:?}"),
    }
}

#[test]
fn channel_is_purely_first_partial_wave() {
    let params = family_params(FormFactorFamily::SharpCutoff, 1.5 * critical_effective(FormFactorFamily::SharpCutoff));
    let point = phase_shift(&params, 0.3, Normalization::Unitary, &cfg()).unwrap();
    let t = point.t_matrix;
    let p1 = partial_wave_projection(&point, 1);
    assert!((p1 - t).norm() <= 1e-14 * t.norm().max(1.0));
    for l in [0u32, 2, 3, 4, 5] {
        let p = partial_wave_projection(&point, l);
        assert!(
            p.norm() <= 1e-14 * t.norm().max(1.0),
            "l {l} leaks {}",
            p.norm()
        );
    }
    // Angular form: 3 t cos(theta) / k.
    for i in 0..7 {
        let c = -1.0 + 0.3 * i as f64;
        let a = scattering_amplitude(&point, c);
        let direct = t * Complex64::new(3.0 * c / point.k, 0.0);
        assert!((a - direct).norm() <= 1e-15 * direct.norm().max(1e-30));
    }
}

#[test]
fn wavefunction_is_exactly_odd() {
    let params = family_params(FormFactorFamily::Gaussian, 1.5 * critical_effective(FormFactorFamily::Gaussian));
    let k_vec = [0.1, -0.25, 0.3];
    let xs = [
        [0.5, 1.2, -0.3],
        [2.0, -0.7, 0.4],
        [10.0, 3.0, -8.0],
        [-0.2, 0.05, 0.11],
    ];
    for x in xs {
        let plus = position_wavefunction(&params, k_vec, x, Normalization::Unitary, &cfg()).unwrap();
        let minus = position_wavefunction(
            &params,
            k_vec,
            [-x[0], -x[1], -x[2]],
            Normalization::Unitary,
            &cfg(),
        )
        .unwrap();
        assert_eq!(plus, -minus, "x {x:?}");
    }
}

#[test]
fn wavefunction_reaches_its_asymptotic_amplitude() {
    for norm in [Normalization::Unitary, Normalization::Bare] {
        let params = family_params(FormFactorFamily::Gaussian, 1.5 * critical_effective(FormFactorFamily::Gaussian));
        let k = 0.4;
        let point = phase_shift(&params, k, norm, &cfg()).unwrap();
        let r = 500.0;
        for (ct, st) in [(1.0_f64, 0.0_f64), (0.5, 0.75_f64.sqrt()), (-0.3, 0.91_f64.sqrt())] {
            // Incident momentum along z; observation direction at angle theta.
            let k_vec = [0.0, 0.0, k];
            let x = [r * st, 0.0, r * ct];
            let psi = position_wavefunction(&params, k_vec, x, norm, &cfg()).unwrap();
            let kdx = k_vec[2] * x[2];
            let incident = Complex64::new(0.0, kdx.sin());
            let carrier = Complex64::from_polar(1.0, k * r) / r;
            let subleading = Complex64::new(1.0, 1.0 / (k * r));
            let extracted = (psi - incident) / (carrier * subleading);
            let f_theta = scattering_amplitude(&point, ct);
            assert!(
                (extracted - f_theta).norm() <= 1e-6 * f_theta.norm().max(1e-8),
                "norm {norm:?} cos {ct}: extracted {extracted} vs {f_theta}"
            );
        }
    }
}
