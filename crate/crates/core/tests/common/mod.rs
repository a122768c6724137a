//! Shared closed-form oracles for the integration tests.
//!
//! Every formula here is a hand-worked antiderivative, independent of the
//! library's adaptive quadrature, so the two sides of each comparison have
//! no code in common.

#![allow(dead_code)]

use galispin_core::{FormFactor, FormFactorFamily, ModelParams, SpinLabel};

pub const TWO_PI_SQ: f64 = 2.0 * core::f64::consts::PI * core::f64::consts::PI;

/// Kernel integral for the sharp cutoff:
/// `-(m/2pi^2) [L^3/3 - kappa^2 L + kappa^3 atan(L/kappa)]`.
pub fn sharp_kernel(m: f64, cut: f64, omega: f64) -> f64 {
    let kappa = (-m * omega).sqrt();
    -(m / TWO_PI_SQ)
        * (cut * cut * cut / 3.0 - kappa * kappa * cut
            + kappa * kappa * kappa * (cut / kappa).atan())
}

/// Pole-strength integral for the sharp cutoff.
pub fn sharp_zeta(m: f64, cut: f64, omega: f64) -> f64 {
    let kappa = (-m * omega).sqrt();
    (m * m / TWO_PI_SQ)
        * (cut - 1.5 * kappa * (cut / kappa).atan()
            + kappa * kappa * cut / (2.0 * (kappa * kappa + cut * cut)))
}

/// Real part of the continued kernel integral for the sharp cutoff,
/// `(m/2pi^2) [-L^3/3 - k^2 L + (k^3/2) ln((L+k)/(L-k))]`.
pub fn sharp_pv_re(m: f64, cut: f64, k: f64) -> f64 {
    (m / TWO_PI_SQ)
        * (-cut * cut * cut / 3.0 - k * k * cut
            + 0.5 * k * k * k * ((cut + k) / (cut - k)).ln())
}

/// Squared-regulator norms `(1/2pi^2) int q^2 |f|^2 dq` by antiderivative.
pub fn n2_closed(family: FormFactorFamily, cut: f64) -> f64 {
    let c3 = cut * cut * cut;
    match family {
        FormFactorFamily::SharpCutoff => c3 / (6.0 * core::f64::consts::PI.powi(2)),
        FormFactorFamily::Gaussian => {
            c3 / (16.0 * 2.0_f64.sqrt() * core::f64::consts::PI.powf(1.5))
        }
        FormFactorFamily::Rational => c3 / (8.0 * core::f64::consts::PI),
    }
}

/// Effective coupling that places the sharp-cutoff bound state at binding
/// momentum `kappa`, from the inverted eigenvalue condition.
pub fn lambda_eff_for_kappa(m: f64, cut: f64, kappa: f64) -> f64 {
    -3.0 / sharp_kernel(m, cut, -kappa * kappa / m)
}

pub fn params(
    family: FormFactorFamily,
    cutoff: f64,
    m: f64,
    lambda: f64,
    two_s: u32,
) -> ModelParams {
    ModelParams::new(
        m,
        lambda,
        SpinLabel::new(two_s),
        FormFactor::new(family, cutoff),
    )
}

/// Sharp cutoff at unit scale and mass, spin 1/2.
pub fn sharp_params(lambda: f64) -> ModelParams {
    params(FormFactorFamily::SharpCutoff, 1.0, 1.0, lambda, 1)
}
