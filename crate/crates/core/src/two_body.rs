//! Two-body observables of the rank-1 separable channel.
//!
//! The interaction couples two identical spin-`two_s/2` particles through a
//! single odd-parity channel whose momentum dependence is `p f(p)`. Spin
//! enters every observable only through the effective coupling
//! `lambda * 2^two_s`; the rest is a one-dimensional radial problem. All
//! energies here are relative (total energy minus the center-of-mass and
//! background shifts), with thresholds at zero.
//!
//! Two amplitude conventions are offered. [`Normalization::Unitary`] fixes
//! the numerator so that `Im(1/t) = -1` holds identically and the S-matrix
//! stays on the unit circle; the grid solvers in [`crate::oracle`] land on
//! this convention. [`Normalization::Bare`] keeps the unregulated `k^3`
//! numerator, which matches the unitary one only in the regime where the
//! regulator is flat at the on-shell point.

use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;
use num_complex::Complex64;
// The test harness links std, whose inherent f64 methods shadow the trait.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::form_factor::FormFactor;
use crate::linalg::fit_line;
use crate::quadrature::{
    gauss_legendre, kernel_integral, pv_kernel_integral, zeta_integral, QuadratureConfig,
};
use crate::roots::{bracket_downward, brent, RootError};

/// Spin carried as the integer `two_s >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinLabel {
    two_s: u32,
}

impl SpinLabel {
    pub fn new(two_s: u32) -> SpinLabel {
        assert!(
            (1..=64).contains(&two_s),
            "spin label two_s must lie in 1..=64"
        );
        SpinLabel { two_s }
    }

    pub fn two_s(&self) -> u32 {
        self.two_s
    }

    /// `2^two_s`: the spin-trace enhancement of the channel coupling.
    /// Exact in floating point for the whole supported range.
    pub fn degeneracy(&self) -> f64 {
        (2.0_f64).powi(self.two_s as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Unregulated `k^3` numerator.
    Bare,
    /// Numerator tied to the denominator's absorptive part; exactly unitary.
    #[default]
    Unitary,
}

#[derive(Debug, Clone)]
pub struct ModelParams {
    pub mass: f64,
    pub coupling: f64,
    pub spin: SpinLabel,
    pub form_factor: FormFactor,
    /// Constant single-particle background shift. Bookkeeping only: it
    /// moves total energies, never relative ones.
    pub background_potential: f64,
    /// Conserved total momentum. Bookkeeping only, as above.
    pub total_momentum: [f64; 3],
}

impl ModelParams {
    pub fn new(mass: f64, coupling: f64, spin: SpinLabel, form_factor: FormFactor) -> ModelParams {
        assert!(mass > 0.0 && mass.is_finite(), "mass must be positive");
        assert!(coupling.is_finite(), "coupling must be finite");
        ModelParams {
            mass,
            coupling,
            spin,
            form_factor,
            background_potential: 0.0,
            total_momentum: [0.0; 3],
        }
    }

    /// `coupling * 2^two_s`.
    pub fn effective_coupling(&self) -> f64 {
        self.coupling * self.spin.degeneracy()
    }

    /// Channel strength in front of the kernel integral.
    fn strength(&self) -> f64 {
        self.effective_coupling() / 3.0
    }

    /// Relative energy for a given total, removing the center-of-mass
    /// kinetic term and twice the background shift.
    pub fn relative_energy(&self, total_energy: f64) -> f64 {
        let p2 = self
            .total_momentum
            .iter()
            .map(|c| c * c)
            .sum::<f64>();
        total_energy - 2.0 * self.background_potential - p2 / (4.0 * self.mass)
    }

    pub fn total_energy(&self, relative_energy: f64) -> f64 {
        let p2 = self
            .total_momentum
            .iter()
            .map(|c| c * c)
            .sum::<f64>();
        relative_energy + 2.0 * self.background_potential + p2 / (4.0 * self.mass)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TwoBodyError {
    /// The attraction is below the binding threshold; `margin` is how far.
    NoBoundState { margin: f64 },
    QuadratureDidNotConverge { what: &'static str },
    Root(RootError),
    /// Phase shift is identically zero or non-finite over the requested
    /// points, so a threshold expansion cannot be fitted.
    DegeneratePhase { k: f64 },
    /// Fit window too narrow to separate the constant from the slope.
    IllConditionedFit { ratio: f64, ratio_needed: f64 },
}

impl fmt::Display for TwoBodyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoBodyError::NoBoundState { margin } => write!(
                f,
                "no bound state: existence margin {margin:.6e} is not positive"
            ),
            TwoBodyError::QuadratureDidNotConverge { what } => {
                write!(f, "radial integral did not converge: {what}")
            }
            TwoBodyError::Root(e) => write!(f, "energy search failed: {e}"),
            TwoBodyError::DegeneratePhase { k } => {
                write!(f, "phase shift degenerate near k = {k:.6e}")
            }
            TwoBodyError::IllConditionedFit {
                ratio,
                ratio_needed,
            } => write!(
                f,
                "fit window ill-conditioned: kmax/kmin = {ratio:.3} < {ratio_needed:.3}"
            ),
        }
    }
}

impl From<RootError> for TwoBodyError {
    fn from(e: RootError) -> Self {
        TwoBodyError::Root(e)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BoundState {
    /// Relative energy, strictly negative.
    pub omega: f64,
    /// Binding momentum `sqrt(-m * omega)`.
    pub kappa: f64,
    /// `|D(omega)|` at the returned energy.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PhaseShiftPoint {
    pub k: f64,
    /// Odd-channel phase shift on the branch (-pi/2, pi/2].
    pub delta: f64,
    pub t_matrix: Complex64,
    pub s_matrix: Complex64,
    /// | |S| - 1 |.
    pub unitarity_residual: f64,
    pub sin_sq_delta: f64,
    /// `k^3 cot(delta)`; `+inf` when the phase vanishes identically.
    pub k3_cot_delta: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct EffectiveRange {
    /// `1/a` in the expansion `k^3 cot(delta) = -1/a + (r0/2) k^2`.
    pub inv_scattering_length: f64,
    pub effective_range: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct ClosedFormReport {
    pub er: EffectiveRange,
    pub bound: BoundState,
    /// Pole strength of the bound-state residue.
    pub zeta: f64,
}

#[derive(Debug, Clone)]
pub struct FitReport {
    pub er: EffectiveRange,
    pub window: (f64, f64),
    pub n_points: usize,
    /// Worst absolute deviation of `k^3 cot(delta)` from the fitted line.
    pub max_residual: f64,
    /// Covariance of (constant, slope) under the residual-scatter estimate.
    pub covariance: [[f64; 2]; 2],
}

/// How far above the binding threshold the attraction sits:
/// `m * lambda_eff * N2 / 3 - 1` with `N2` the squared-regulator norm.
/// A bound state exists exactly when this is positive.
pub fn existence_margin(params: &ModelParams) -> f64 {
    params.mass * params.strength() * params.form_factor.norm_sq_integral() - 1.0
}

/// `D(omega) = 1 + (lambda_eff/3) I(omega)` below threshold.
pub fn bound_denominator(
    params: &ModelParams,
    omega: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, TwoBodyError> {
    let r = kernel_integral(&params.form_factor, params.mass, omega, cfg);
    if !r.converged {
        return Err(TwoBodyError::QuadratureDidNotConverge {
            what: "kernel integral below threshold",
        });
    }
    Ok(1.0 + params.strength() * r.value)
}

/// `D(U) = 1 + (lambda_eff/3) I(U + i0)` at `U = k^2/m`.
pub fn scattering_denominator(
    params: &ModelParams,
    k: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64, TwoBodyError> {
    let r = pv_kernel_integral(&params.form_factor, params.mass, k, cfg);
    if !r.converged {
        return Err(TwoBodyError::QuadratureDidNotConverge {
            what: "kernel integral above threshold",
        });
    }
    Ok(Complex64::new(1.0, 0.0) + r.value * params.strength())
}

/// Finds the zero of the denominator on the negative energy axis.
/// `tol` is an absolute tolerance on the energy; the reported residual is
/// the denominator magnitude at the solution.
pub fn solve_bound_state(
    params: &ModelParams,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<BoundState, TwoBodyError> {
    let margin = existence_margin(params);
    if margin <= 0.0 {
        return Err(TwoBodyError::NoBoundState { margin });
    }
    let scale = params.form_factor.cutoff * params.form_factor.cutoff / params.mass;
    let err = core::cell::Cell::new(None);
    let mut d = |omega: f64| match bound_denominator(params, omega, cfg) {
        Ok(v) => v,
        Err(e) => {
            err.set(Some(e));
            f64::NAN
        }
    };

    // D -> -margin as omega -> 0- and D -> 1 far below threshold.
    let mut hi = -1e-10 * scale;
    let mut hi_ok = false;
    for _ in 0..30 {
        let v = d(hi);
        if v.is_nan() {
            break;
        }
        if v < 0.0 {
            hi_ok = true;
            break;
        }
        hi *= 1e-2;
    }
    if let Some(e) = err.take() {
        return Err(e);
    }
    if !hi_ok {
        return Err(TwoBodyError::Root(RootError::NotBracketed));
    }
    let bracket = bracket_downward(&mut d, hi, 4.0, 200);
    if let Some(e) = err.take() {
        return Err(e);
    }
    let (lo, hi) = bracket.ok_or(RootError::NotBracketed)?;
    let omega = brent(&mut d, lo, hi, tol, 200)?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    let residual = bound_denominator(params, omega, cfg)?.abs();
    Ok(BoundState {
        omega,
        kappa: (-params.mass * omega).sqrt(),
        residual,
    })
}

fn reduce_to_principal(mut delta: f64) -> f64 {
    while delta > FRAC_PI_2 {
        delta -= PI;
    }
    while delta <= -FRAC_PI_2 {
        delta += PI;
    }
    delta
}

/// On-shell odd-channel amplitude and phase shift at momentum `k > 0`.
pub fn phase_shift(
    params: &ModelParams,
    k: f64,
    norm: Normalization,
    cfg: &QuadratureConfig,
) -> Result<PhaseShiftPoint, TwoBodyError> {
    assert!(k > 0.0 && k.is_finite(), "momentum must be positive");
    let den = scattering_denominator(params, k, cfg)?;
    let numerator = match norm {
        Normalization::Bare => params.mass * params.effective_coupling() * k * k * k / 3.0,
        Normalization::Unitary => {
            params.strength()
                * (params.mass * k * k * k / (4.0 * PI))
                * params.form_factor.eval_sq(k)
        }
    };
    let t = Complex64::new(numerator, 0.0) / den;
    let (delta, k3_cot_delta) = if t.norm_sqr() == 0.0 {
        (0.0, f64::INFINITY)
    } else {
        let delta = reduce_to_principal(t.im.atan2(t.re));
        (delta, k * k * k * delta.cos() / delta.sin())
    };
    let s_matrix = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 2.0) * t;
    Ok(PhaseShiftPoint {
        k,
        delta,
        t_matrix: t,
        s_matrix,
        unitarity_residual: (s_matrix.norm() - 1.0).abs(),
        sin_sq_delta: delta.sin() * delta.sin(),
        k3_cot_delta,
    })
}

/// Scattering amplitude at scattering angle `acos(cos_theta)`:
/// `3 t cos_theta / k`.
pub fn scattering_amplitude(
    point: &PhaseShiftPoint,
    cos_theta: f64,
) -> Complex64 {
    point.t_matrix * (3.0 * cos_theta / point.k)
}

/// Full angular amplitude projected on the Legendre component `l`. The
/// channel is purely `l = 1`, so every other projection vanishes to
/// quadrature accuracy.
pub fn partial_wave_projection(point: &PhaseShiftPoint, l: u32) -> Complex64 {
    let n = 16usize.max(l as usize + 4);
    let (nodes, weights) = gauss_legendre(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(&weights) {
        let a = point.t_matrix * (3.0 * x);
        acc += a * (w * legendre(l, *x));
    }
    acc * 0.5
}

fn legendre(l: u32, x: f64) -> f64 {
    match l {
        0 => 1.0,
        1 => x,
        _ => {
            let mut pm = 1.0;
            let mut p = x;
            for n in 1..l {
                let nf = n as f64;
                let next = ((2.0 * nf + 1.0) * x * p - nf * pm) / (nf + 1.0);
                pm = p;
                p = next;
            }
            p
        }
    }
}

/// Position-space channel wavefunction at displacement `x` for incident
/// momentum `k_vec`: the odd plane-wave combination plus the outgoing
/// scattered wave of the separable channel. Exactly odd under `x -> -x`.
pub fn position_wavefunction(
    params: &ModelParams,
    k_vec: [f64; 3],
    x: [f64; 3],
    norm: Normalization,
    cfg: &QuadratureConfig,
) -> Result<Complex64, TwoBodyError> {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    assert!(r > 0.0, "wavefunction is evaluated away from the origin");
    let k = (k_vec[0] * k_vec[0] + k_vec[1] * k_vec[1] + k_vec[2] * k_vec[2]).sqrt();
    assert!(k > 0.0, "incident momentum must be nonzero");
    let den = scattering_denominator(params, k, cfg)?;
    let weight = match norm {
        Normalization::Bare => 1.0,
        Normalization::Unitary => params.form_factor.eval_sq(k) / (4.0 * PI),
    };
    let kdx = k_vec[0] * x[0] + k_vec[1] * x[1] + k_vec[2] * x[2];
    let incident = Complex64::new(0.0, kdx.sin());
    // (k + i/r) e^{ikr} / r times the angular factor (k_vec . x)/r.
    let radial = Complex64::new(k, 1.0 / r) * Complex64::from_polar(1.0, k * r) / r;
    let scattered = radial
        * (weight * params.mass * params.effective_coupling() * (kdx / r))
        / den;
    Ok(incident + scattered)
}

/// Threshold expansion from the bound-state side: scattering length and
/// effective range in the shallow-binding closed form built on the pole
/// position and residue strength.
pub fn effective_range_closed_form(
    params: &ModelParams,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<ClosedFormReport, TwoBodyError> {
    let bound = solve_bound_state(params, tol, cfg)?;
    let z = zeta_integral(&params.form_factor, params.mass, bound.omega, cfg);
    if !z.converged {
        return Err(TwoBodyError::QuadratureDidNotConverge {
            what: "pole-strength integral",
        });
    }
    let zeta = z.value;
    let m = params.mass;
    let kappa3 = bound.kappa * bound.kappa * bound.kappa;
    let inv_a = -(4.0 * PI * zeta * bound.omega / m) + kappa3 / 2.0;
    let r0 = -8.0 * PI * zeta / (m * m) - 3.0 * bound.kappa;
    Ok(ClosedFormReport {
        er: EffectiveRange {
            inv_scattering_length: inv_a,
            effective_range: r0,
        },
        bound,
        zeta,
    })
}

/// Fits `k^3 cot(delta) = -1/a + (r0/2) k^2` over `n` evenly spaced momenta
/// in `[kmin, kmax]`.
pub fn effective_range_fit(
    params: &ModelParams,
    kmin: f64,
    kmax: f64,
    n: usize,
    norm: Normalization,
    cfg: &QuadratureConfig,
) -> Result<FitReport, TwoBodyError> {
    assert!(n >= 4, "fit needs at least 4 points");
    assert!(kmin > 0.0 && kmax > kmin, "fit window must be ordered");
    let ratio = kmax / kmin;
    if ratio < 2.0 {
        return Err(TwoBodyError::IllConditionedFit {
            ratio,
            ratio_needed: 2.0,
        });
    }
    let mut xs = alloc::vec::Vec::with_capacity(n);
    let mut ys = alloc::vec::Vec::with_capacity(n);
    for i in 0..n {
        let k = kmin + (kmax - kmin) * (i as f64) / ((n - 1) as f64);
        let point = phase_shift(params, k, norm, cfg)?;
        if !point.k3_cot_delta.is_finite() {
            return Err(TwoBodyError::DegeneratePhase { k });
        }
        xs.push(k * k);
        ys.push(point.k3_cot_delta);
    }
    let (c0, c1, max_residual, covariance) = fit_line(&xs, &ys);
    Ok(FitReport {
        er: EffectiveRange {
            inv_scattering_length: -c0,
            effective_range: 2.0 * c1,
        },
        window: (kmin, kmax),
        n_points: n,
        max_residual,
        covariance,
    })
}

/// Log-log slope of the phase shift between two momenta near threshold.
/// The odd channel opens as `k^3`, so this sits near 3.
pub fn threshold_log_slope(
    params: &ModelParams,
    k1: f64,
    k2: f64,
    norm: Normalization,
    cfg: &QuadratureConfig,
) -> Result<f64, TwoBodyError> {
    assert!(k1 > 0.0 && k2 > k1);
    let d1 = phase_shift(params, k1, norm, cfg)?.delta;
    let d2 = phase_shift(params, k2, norm, cfg)?.delta;
    if d1 == 0.0 || d2 == 0.0 {
        return Err(TwoBodyError::DegeneratePhase { k: k1 });
    }
    Ok((d2.abs() / d1.abs()).ln() / (k2 / k1).ln())
}
