//! Radial momentum integrals for the separable channel.
//!
//! Semi-infinite integrals are mapped to a compact parameter by
//! q = q0 + scale * t / (1 - t) and refined adaptively with a 15-point
//! Gauss-Legendre panel rule. Above threshold the kernel integral is
//! continued with an on-shell subtraction: the identity
//! PV int_0^inf dq / (k^2 - q^2) = 0 removes the pole analytically, and the
//! delta-function part supplies the exact imaginary term.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
// The test harness links std, whose inherent f64 methods shadow the trait.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::form_factor::FormFactor;

/// Treatment of the semi-infinite domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mapping {
    /// Truncate at a fixed multiple of the cutoff. Diagnostic mode: the
    /// rational family has O(cutoff/q_trunc) tails, so results carry a
    /// truncation bias there.
    Compact,
    /// Map the tail through q = q0 + scale * t / (1 - t).
    SemiInfinite,
}

/// Multiple of the cutoff at which `Mapping::Compact` truncates.
pub const COMPACT_TRUNCATION: f64 = 40.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Relative tolerance against the integral of |integrand|.
    pub rel_tol: f64,
    /// Maximum bisection depth per panel.
    pub max_refinements: u32,
    pub mapping: Mapping,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-10,
            max_refinements: 40,
            mapping: Mapping::SemiInfinite,
        }
    }
}

/// Outcome of one radial integral. `converged == true` guarantees
/// `abs_error_estimate` is within the requested tolerance; a `false` flag
/// still carries the partial value so callers can report it.
#[derive(Clone, Copy, Debug)]
pub struct RadialIntegralResult<T = f64> {
    pub value: T,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

struct PanelRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl PanelRule {
    fn gl15() -> Self {
        let (nodes, weights) = gauss_legendre(15);
        PanelRule { nodes, weights }
    }

    fn apply(&self, f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc += w * f(c + h * x);
        }
        acc * h
    }

    fn apply_abs(&self, f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(self.weights.iter()) {
            acc += w * f(c + h * x).abs();
        }
        acc * h
    }
}

/// Adaptive bisection over a list of pieces sharing one absolute error
/// budget, distributed by length.
fn integrate_pieces(
    f: &mut impl FnMut(f64) -> f64,
    pieces: &[(f64, f64)],
    cfg: &QuadratureConfig,
) -> RadialIntegralResult {
    let rule = PanelRule::gl15();
    let total_len: f64 = pieces.iter().map(|(a, b)| b - a).sum();
    let mut scale = 0.0;
    for &(a, b) in pieces {
        scale += rule.apply_abs(f, a, b);
    }
    let tol_abs = cfg.rel_tol * scale.max(f64::MIN_POSITIVE);
    let mut value = 0.0;
    let mut err = 0.0;
    let mut converged = true;
    for &(a0, b0) in pieces {
        let whole = rule.apply(f, a0, b0);
        // stack entries: (a, b, parent estimate, depth)
        let mut stack: Vec<(f64, f64, f64, u32)> = vec![(a0, b0, whole, 0)];
        while let Some((a, b, parent, depth)) = stack.pop() {
            let mid = 0.5 * (a + b);
            let left = rule.apply(f, a, mid);
            let right = rule.apply(f, mid, b);
            let delta = (left + right - parent).abs();
            // Roundoff floor: once the refinement difference sits at the
            // rounding level of the panel values, further splitting only
            // multiplies panels without gaining accuracy. The 15-node sums
            // carry a few ulps of noise each, hence the coefficient.
            let floor = 2e-14 * (left.abs() + right.abs());
            let budget = (tol_abs * (b - a) / total_len).max(floor);
            if delta <= budget {
                value += left + right;
                err += delta;
            } else if depth >= cfg.max_refinements {
                value += left + right;
                err += delta;
                converged = false;
            } else {
                stack.push((a, mid, left, depth + 1));
                stack.push((mid, b, right, depth + 1));
            }
        }
    }
    RadialIntegralResult {
        value,
        abs_error_estimate: err,
        converged,
    }
}

/// Adaptive integral over one finite interval.
pub fn integrate_adaptive(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> RadialIntegralResult {
    integrate_pieces(&mut f, &[(a, b)], cfg)
}

/// Adaptive integral of f over [q0, inf) through the rational map.
pub fn integrate_semi_infinite(
    mut f: impl FnMut(f64) -> f64,
    q0: f64,
    scale: f64,
    cfg: &QuadratureConfig,
) -> RadialIntegralResult {
    assert!(scale > 0.0);
    let mut g = |t: f64| {
        let om = 1.0 - t;
        let q = q0 + scale * t / om;
        f(q) * scale / (om * om)
    };
    integrate_pieces(&mut g, &[(0.0, 1.0)], cfg)
}

/// Integration layout for one form factor: finite pieces plus an optional
/// mapped tail starting where the last piece ends.
fn radial_layout(ff: &FormFactor, cfg: &QuadratureConfig, inner_edges: &[f64]) -> (Vec<(f64, f64)>, Option<f64>) {
    let upper = match ff.support_upper() {
        // The sharp edge must be the exact end of integration: panels never
        // straddle the discontinuity.
        Some(edge) => edge,
        None => {
            let base = match cfg.mapping {
                Mapping::Compact => COMPACT_TRUNCATION * ff.cutoff,
                Mapping::SemiInfinite => 5.0 * ff.cutoff,
            };
            inner_edges.iter().fold(base, |u, &e| u.max(1.5 * e))
        }
    };
    let mut edges: Vec<f64> = vec![0.0];
    for &e in inner_edges {
        if e > 0.0 && e < upper {
            edges.push(e);
        }
    }
    edges.push(upper);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup();
    let pieces: Vec<(f64, f64)> = edges.windows(2).map(|w| (w[0], w[1])).collect();
    let tail = match (ff.support_upper(), cfg.mapping) {
        (Some(_), _) => None,
        (None, Mapping::Compact) => None,
        (None, Mapping::SemiInfinite) => Some(upper),
    };
    (pieces, tail)
}

fn combine(a: RadialIntegralResult, b: RadialIntegralResult) -> RadialIntegralResult {
    RadialIntegralResult {
        value: a.value + b.value,
        abs_error_estimate: a.abs_error_estimate + b.abs_error_estimate,
        converged: a.converged && b.converged,
    }
}

/// (1/2 pi^2) int_0^inf q^4 |f|^2 / (omega - q^2/m) dq for omega < 0.
/// Strictly negative; diverges to -inf only in the no-cutoff limit.
pub fn kernel_integral(ff: &FormFactor, m: f64, omega: f64, cfg: &QuadratureConfig) -> RadialIntegralResult {
    assert!(m > 0.0, "mass must be positive");
    assert!(omega < 0.0, "kernel integral requires energy below threshold");
    let mut integrand = |q: f64| {
        let fs = ff.eval_sq(q);
        if fs == 0.0 {
            return 0.0;
        }
        // ordered to stay finite for very large q
        (q * q * fs) * (q * q / (omega - q * q / m))
    };
    let (pieces, tail) = radial_layout(ff, cfg, &[]);
    let mut res = integrate_pieces(&mut integrand, &pieces, cfg);
    if let Some(q0) = tail {
        res = combine(res, integrate_semi_infinite(&mut integrand, q0, ff.cutoff, cfg));
    }
    scale_result(res, 1.0 / (2.0 * PI * PI))
}

/// (1/2 pi^2) int_0^inf q^4 |f|^2 / (omega - q^2/m)^2 dq for omega < 0: the
/// residue strength of the bound-state pole, equal to -d/d omega of the
/// kernel integral.
pub fn zeta_integral(ff: &FormFactor, m: f64, omega: f64, cfg: &QuadratureConfig) -> RadialIntegralResult {
    assert!(m > 0.0, "mass must be positive");
    assert!(omega < 0.0, "pole-strength integral requires energy below threshold");
    let mut integrand = |q: f64| {
        let fs = ff.eval_sq(q);
        if fs == 0.0 {
            return 0.0;
        }
        let den = omega - q * q / m;
        (q * q * fs) * (q * q / (den * den))
    };
    let (pieces, tail) = radial_layout(ff, cfg, &[]);
    let mut res = integrate_pieces(&mut integrand, &pieces, cfg);
    if let Some(q0) = tail {
        res = combine(res, integrate_semi_infinite(&mut integrand, q0, ff.cutoff, cfg));
    }
    scale_result(res, 1.0 / (2.0 * PI * PI))
}

/// Kernel integral continued to scattering energy U = k^2/m + i0.
///
/// Real part by on-shell subtraction over [0, B] plus the analytic remainder
/// of the subtraction constant; imaginary part is the exact delta-function
/// term -(m k^3 / 4 pi) |f(k)|^2.
pub fn pv_kernel_integral(
    ff: &FormFactor,
    m: f64,
    k: f64,
    cfg: &QuadratureConfig,
) -> RadialIntegralResult<Complex64> {
    assert!(m > 0.0, "mass must be positive");
    assert!(k > 0.0, "on-shell momentum must be positive");
    if let Some(edge) = ff.support_upper() {
        assert!(
            k < edge,
            "on-shell momentum must lie strictly inside the sharp-cutoff support"
        );
    }
    let phi = |q: f64| {
        let fs = ff.eval_sq(q);
        if fs == 0.0 {
            return 0.0;
        }
        (q * q) * (q * q) * fs
    };
    let phi_k = phi(k);
    // Subtracted region [0, B]: split exactly at the pole so panel nodes
    // never evaluate the removable singularity too closely.
    let (pieces, tail) = radial_layout(ff, cfg, &[k, 2.0 * k]);
    let b_edge = pieces.last().unwrap().1;
    let mut subtracted = |q: f64| (phi(q) - phi_k) / (k * k - q * q);
    let mut res = integrate_pieces(&mut subtracted, &pieces, cfg);
    if let Some(q0) = tail {
        let mut plain = |q: f64| {
            let p = phi(q);
            if p == 0.0 {
                0.0
            } else {
                p / (k * k - q * q)
            }
        };
        res = combine(res, integrate_semi_infinite(&mut plain, q0, ff.cutoff, cfg));
    }
    // Remainder of the subtraction constant over [B, inf):
    // PV int_0^inf dq/(k^2-q^2) = 0 pushes it to +ln((B+k)/(B-k)) / 2k.
    let tail_const = phi_k * ((b_edge + k) / (b_edge - k)).ln() / (2.0 * k);
    let re = (res.value + tail_const) * m / (2.0 * PI * PI);
    let im = -(m * k * k * k / (4.0 * PI)) * ff.eval_sq(k);
    RadialIntegralResult {
        value: Complex64::new(re, im),
        abs_error_estimate: res.abs_error_estimate * m / (2.0 * PI * PI),
        converged: res.converged,
    }
}

/// (1/2 pi^2) int_0^inf q^n |f|^2 dq. Reports non-convergence up front when
/// the family lacks the moment instead of returning a truncation-dependent
/// number.
pub fn radial_moment(ff: &FormFactor, n: u32, cfg: &QuadratureConfig) -> RadialIntegralResult {
    if !ff.has_finite_moment(n) {
        return RadialIntegralResult {
            value: f64::INFINITY,
            abs_error_estimate: f64::INFINITY,
            converged: false,
        };
    }
    let mut integrand = |q: f64| {
        let fs = ff.eval_sq(q);
        if fs == 0.0 {
            return 0.0;
        }
        if n >= 2 {
            (q * q * fs) * q.powi(n as i32 - 2)
        } else {
            fs * q.powi(n as i32)
        }
    };
    let (pieces, tail) = radial_layout(ff, cfg, &[]);
    let mut res = integrate_pieces(&mut integrand, &pieces, cfg);
    if let Some(q0) = tail {
        res = combine(res, integrate_semi_infinite(&mut integrand, q0, ff.cutoff, cfg));
    }
    scale_result(res, 1.0 / (2.0 * PI * PI))
}

fn scale_result(r: RadialIntegralResult, c: f64) -> RadialIntegralResult {
    RadialIntegralResult {
        value: r.value * c,
        abs_error_estimate: r.abs_error_estimate * c.abs(),
        converged: r.converged,
    }
}
