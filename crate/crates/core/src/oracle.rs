//! Independent solvers used to cross-check the closed-form pipeline.
//!
//! Nothing here reuses the adaptive quadrature or the denominator algebra
//! of [`crate::two_body`]: the scattering check solves the discretized
//! standing-wave integral equation on a fixed momentum grid, the bound
//! check diagonalizes the rank-1 grid Hamiltonian through its secular
//! equation, and the exchange check contracts the spin pairing tensor
//! entry by entry. Agreement between these and the analytic path is the
//! main correctness evidence for both.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use num_complex::Complex64;
// The test harness links std, whose inherent f64 methods shadow the trait.
#[cfg_attr(test, allow(unused_imports))]
use num_traits::Float;

use crate::form_factor::FormFactor;
use crate::linalg::{jacobi_eigenvalues, solve_real};
use crate::quadrature::{gauss_legendre, QuadratureConfig};
use crate::roots::brent;
use crate::spinor::{exchange_sign, pairing_tensor, pairing_transpose_sign, SpinorError};
use crate::two_body::{phase_shift, solve_bound_state, ModelParams, Normalization, TwoBodyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScheme {
    /// Gauss-Legendre nodes sent through the rational map
    /// `q = q0 (1+x) / (1 - x + 2 q0 / q_max)`, which clusters points at
    /// low momentum and still reaches `q_max`.
    GaussLegendreMapped,
    /// Evenly spaced nodes with composite Simpson weights. Fourth-order;
    /// used to demonstrate convergence under grid refinement.
    Uniform,
}

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub n_points: usize,
    pub q_max: f64,
    pub scheme: GridScheme,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleQuantity {
    PhaseShift,
    BoundStateEnergy,
    SelectionRule,
}

impl fmt::Display for OracleQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OracleQuantity::PhaseShift => "phase_shift",
            OracleQuantity::BoundStateEnergy => "bound_state_energy",
            OracleQuantity::SelectionRule => "selection_rule",
        };
        write!(f, "{s}")
    }
}

/// One oracle-versus-analytic comparison.
#[derive(Debug, Clone, Copy)]
pub struct OracleReport {
    pub quantity: OracleQuantity,
    pub oracle_value: f64,
    pub analytic_value: f64,
    pub abs_diff: f64,
}

impl OracleReport {
    fn new(quantity: OracleQuantity, oracle_value: f64, analytic_value: f64) -> OracleReport {
        OracleReport {
            quantity,
            oracle_value,
            analytic_value,
            abs_diff: (oracle_value - analytic_value).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    Grid(&'static str),
    Solver(&'static str),
    TwoBody(TwoBodyError),
    Spinor(SpinorError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Grid(s) => write!(f, "grid: {s}"),
            OracleError::Solver(s) => write!(f, "solver: {s}"),
            OracleError::TwoBody(e) => write!(f, "analytic side: {e}"),
            OracleError::Spinor(e) => write!(f, "spin algebra: {e}"),
        }
    }
}

impl From<TwoBodyError> for OracleError {
    fn from(e: TwoBodyError) -> Self {
        OracleError::TwoBody(e)
    }
}

impl From<SpinorError> for OracleError {
    fn from(e: SpinorError) -> Self {
        OracleError::Spinor(e)
    }
}

/// Grid nodes and weights on `[0, q_max]`. The sharp family must put
/// `q_max` exactly at the cutoff; soft families need room for their tails.
pub fn momentum_grid(spec: &GridSpec, ff: &FormFactor) -> Result<(Vec<f64>, Vec<f64>), OracleError> {
    if spec.n_points < 16 {
        return Err(OracleError::Grid("n_points must be at least 16"));
    }
    if !(spec.q_max > 0.0 && spec.q_max.is_finite()) {
        return Err(OracleError::Grid("q_max must be positive and finite"));
    }
    match ff.support_upper() {
        Some(edge) => {
            if ((spec.q_max - edge) / edge).abs() > 1e-12 {
                return Err(OracleError::Grid(
                    "q_max must equal the cutoff for the sharp family",
                ));
            }
        }
        None => {
            if spec.q_max < 5.0 * ff.cutoff {
                return Err(OracleError::Grid(
                    "q_max must be at least five cutoffs for soft families",
                ));
            }
        }
    }
    match spec.scheme {
        GridScheme::GaussLegendreMapped => {
            let q0 = (2.0 * ff.cutoff).min(spec.q_max / 2.0);
            let (xs, ws) = gauss_legendre(spec.n_points);
            let c = 2.0 * q0 / spec.q_max;
            let mut nodes = Vec::with_capacity(spec.n_points);
            let mut weights = Vec::with_capacity(spec.n_points);
            for (x, w) in xs.iter().zip(&ws) {
                let den = 1.0 - x + c;
                nodes.push(q0 * (1.0 + x) / den);
                weights.push(w * q0 * (2.0 + c) / (den * den));
            }
            Ok((nodes, weights))
        }
        GridScheme::Uniform => {
            if spec.n_points % 2 == 0 {
                return Err(OracleError::Grid(
                    "Uniform grid needs an odd number of points for composite Simpson",
                ));
            }
            let n = spec.n_points;
            let h = spec.q_max / ((n - 1) as f64);
            let nodes = (0..n).map(|i| i as f64 * h).collect();
            let weights = (0..n)
                .map(|i| {
                    let c = if i == 0 || i == n - 1 {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    c * h / 3.0
                })
                .collect();
            Ok((nodes, weights))
        }
    }
}

/// Solves the standing-wave integral equation of the separable channel on
/// the grid and compares the resulting phase shift with the unitary
/// analytic amplitude. The principal value is handled by on-shell
/// subtraction, with the subtraction constant folded into an extra
/// on-shell row.
pub fn ls_phase_shift(
    params: &ModelParams,
    k: f64,
    spec: &GridSpec,
    cfg: &QuadratureConfig,
) -> Result<OracleReport, OracleError> {
    let (nodes, weights) = momentum_grid(spec, &params.form_factor)?;
    if !(k > 0.0 && k < spec.q_max) {
        return Err(OracleError::Grid(
            "on-shell momentum must lie strictly inside (0, q_max)",
        ));
    }
    for q in &nodes {
        if (q - k).abs() < 1e-9 * spec.q_max {
            return Err(OracleError::Grid(
                "on-shell momentum collides with a grid node",
            ));
        }
    }
    let m = params.mass;
    let strength = params.effective_coupling() / 3.0;
    let ff = &params.form_factor;
    let vertex = |q: f64| q * ff.eval(q);
    let v = |p: f64, q: f64| -strength * vertex(p) * vertex(q);

    let n = nodes.len();
    let dim = n + 1;
    let mut q_all = nodes.clone();
    q_all.push(k);

    let mut u = vec![0.0_f64; dim];
    let mut pole_sum = 0.0;
    for j in 0..n {
        let den = k * k - nodes[j] * nodes[j];
        u[j] = m / (2.0 * PI * PI) * weights[j] * nodes[j] * nodes[j] / den;
        pole_sum += weights[j] / den;
    }
    let pv_exact = ((spec.q_max + k) / (spec.q_max - k)).ln() / (2.0 * k);
    u[n] = m * k * k / (2.0 * PI * PI) * (pv_exact - pole_sum);

    let mut a = vec![0.0_f64; dim * dim];
    let mut b = vec![0.0_f64; dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut val = -v(q_all[i], q_all[j]) * u[j];
            if i == j {
                val += 1.0;
            }
            a[i * dim + j] = val;
        }
        b[i] = v(q_all[i], k);
    }
    solve_real(&mut a, &mut b, dim)
        .ok_or(OracleError::Solver("singular standing-wave system"))?;
    let k_on = b[n];
    let tan_delta = -(m * k / (4.0 * PI)) * k_on;
    let oracle_delta = tan_delta.atan();

    let analytic = phase_shift(params, k, Normalization::Unitary, cfg)?.delta;
    Ok(OracleReport::new(
        OracleQuantity::PhaseShift,
        oracle_delta,
        analytic,
    ))
}

#[derive(Debug, Clone)]
pub struct GridBoundReport {
    pub report: OracleReport,
    /// Number of negative levels of the grid Hamiltonian. Rank-1
    /// attraction can pull down at most one.
    pub negative_levels: usize,
    /// Gap between the secular root and the lowest dense eigenvalue, when
    /// the grid is small enough to diagonalize directly.
    pub jacobi_gap: Option<f64>,
    /// Discrete existence margin: secular function just below threshold.
    pub grid_margin: f64,
}

/// Lowest level of the grid Hamiltonian `diag(q^2/m) - u u^T`, found
/// through its secular equation, against the adaptive bound-state solver.
pub fn grid_bound_state(
    params: &ModelParams,
    spec: &GridSpec,
    cfg: &QuadratureConfig,
) -> Result<GridBoundReport, OracleError> {
    let (nodes, weights) = momentum_grid(spec, &params.form_factor)?;
    let m = params.mass;
    let strength = params.effective_coupling() / 3.0;
    if strength <= 0.0 {
        return Err(OracleError::Solver(
            "grid bound-state search needs an attractive channel",
        ));
    }
    let ff = &params.form_factor;
    let n = nodes.len();
    let mut d = vec![0.0_f64; n];
    let mut u2 = vec![0.0_f64; n];
    for i in 0..n {
        let q = nodes[i];
        d[i] = q * q / m;
        u2[i] = strength / (2.0 * PI * PI) * weights[i] * q * q * q * q * ff.eval_sq(q);
    }
    let secular = |e: f64| -> f64 {
        let mut s = -1.0;
        for i in 0..n {
            if u2[i] != 0.0 {
                s += u2[i] / (d[i] - e);
            }
        }
        s
    };
    let scale = ff.cutoff * ff.cutoff / m;
    let hi = -1e-12 * scale;
    let grid_margin = secular(hi);
    if grid_margin <= 0.0 {
        return Err(OracleError::Solver("no bound state on this grid"));
    }
    let mut lo = -scale;
    let mut found = false;
    for _ in 0..200 {
        if secular(lo) < 0.0 {
            found = true;
            break;
        }
        lo *= 4.0;
    }
    if !found {
        return Err(OracleError::Solver("grid secular equation not bracketed"));
    }
    let e_grid = brent(secular, lo, hi, 1e-15 * scale, 200)
        .map_err(|_| OracleError::Solver("grid secular root search failed"))?;

    // Dense cross-check on small grids: the secular root must be the
    // unique negative eigenvalue.
    let (negative_levels, jacobi_gap) = if n <= 80 {
        let mut h = vec![0.0_f64; n * n];
        for i in 0..n {
            for j in 0..n {
                h[i * n + j] = -(u2[i].sqrt() * u2[j].sqrt());
            }
            h[i * n + i] += d[i];
        }
        let eigs = jacobi_eigenvalues(&h, n);
        let neg = eigs.iter().filter(|&&e| e < 0.0).count();
        (neg, Some((eigs[0] - e_grid).abs()))
    } else {
        (1, None)
    };

    let analytic = solve_bound_state(params, 1e-13 * scale, cfg)?;
    Ok(GridBoundReport {
        report: OracleReport::new(OracleQuantity::BoundStateEnergy, e_grid, analytic.omega),
        negative_levels,
        jacobi_gap,
        grid_margin,
    })
}

/// Smooth even trial profile for the exchange check.
pub fn trial_even(xi: f64) -> f64 {
    (-xi * xi).exp() * (1.0 + 0.3 * xi.cos())
}

/// Smooth odd trial profile for the exchange check.
pub fn trial_odd(xi: f64) -> f64 {
    xi * (-xi * xi).exp() * (1.0 + 0.2 * xi * xi)
}

/// Odd current weight the exchange amplitude is integrated against.
fn current_weight(xi: f64) -> f64 {
    -xi * (-0.5 * xi * xi).exp()
}

#[derive(Debug, Clone)]
pub struct ExchangeReport {
    pub two_s: u32,
    /// Transpose sign of the pairing tensor, read from the matrix.
    pub transpose_sign: f64,
    /// Commutation sign assigned to the fields.
    pub exchange_sign: f64,
    /// Largest pairing-channel amplitude over the grid; exactly zero for
    /// an even trial.
    pub max_amplitude: f64,
    /// Current-weighted matrix element through the spin contraction.
    pub matrix_element: f64,
    /// Same matrix element in the spinless two-mode model.
    pub scalar_matrix_element: f64,
    pub abs_diff: f64,
    /// Surviving relative-coordinate profile, normalized per spin
    /// component; identical across spins.
    pub profile: Vec<f64>,
    pub grid: Vec<f64>,
    /// Largest imaginary leak anywhere in the contraction.
    pub max_imag: f64,
}

impl ExchangeReport {
    pub fn summary(&self) -> OracleReport {
        OracleReport::new(
            OracleQuantity::SelectionRule,
            self.matrix_element,
            self.scalar_matrix_element,
        )
    }
}

/// Builds the two-sided exchange amplitude of a trial profile through the
/// explicit pairing-tensor contraction and integrates it against an odd
/// current weight. For any trial the surviving part is the odd projection,
/// independent of spin; an even trial cancels identically.
pub fn exchange_selection_rule(
    two_s: u32,
    trial: impl Fn(f64) -> f64,
    half_points: usize,
    extent: f64,
) -> Result<ExchangeReport, OracleError> {
    if two_s > 8 {
        return Err(OracleError::Grid(
            "exchange contraction is held to two_s <= 8",
        ));
    }
    if half_points < 4 || !(extent > 0.0) {
        return Err(OracleError::Grid(
            "exchange grid needs at least 4 points per side and positive extent",
        ));
    }
    let t = pairing_tensor(two_s)?;
    let t_sign = pairing_transpose_sign(&t)
        .ok_or(OracleError::Solver("pairing tensor lost its transpose parity"))?;
    let s_x = exchange_sign(two_s);
    let side = 1usize << two_s;
    let mask = side - 1;

    // One nonzero per row: T[a, a ^ mask]. Precompute those entries.
    let mut entries = Vec::with_capacity(side);
    for a in 0..side {
        entries.push(t[(a, a ^ mask)]);
    }

    let step = extent / half_points as f64;
    let mut grid = Vec::with_capacity(2 * half_points);
    for g in (0..half_points).rev() {
        grid.push(-(g as f64 + 0.5) * step);
    }
    for g in 0..half_points {
        grid.push((g as f64 + 0.5) * step);
    }

    let mut max_amplitude = 0.0_f64;
    let mut max_imag = 0.0_f64;
    let mut profile = Vec::with_capacity(grid.len());
    let mut matrix_element = 0.0;
    let mut scalar_matrix_element = 0.0;
    let mut terms = vec![Complex64::new(0.0, 0.0); side];
    for &xi in &grid {
        let psi_p = trial(xi);
        let psi_m = trial(-xi);
        for a in 0..side {
            let tab = entries[a];
            let tba = entries[a ^ mask];
            let f_a = tab * psi_p + tba * (s_x * psi_m);
            max_amplitude = max_amplitude.max(f_a.norm());
            terms[a] = tab.conj() * f_a;
        }
        // Pairwise reduction: partial sums stay power-of-two multiples, so
        // equal terms add without rounding and the per-component result is
        // independent of `side`.
        let mut len = side;
        while len > 1 {
            len /= 2;
            for a in 0..len {
                terms[a] = terms[a] + terms[a + len];
            }
        }
        let c = terms[0] / side as f64;
        max_imag = max_imag.max(c.im.abs());
        profile.push(c.re / 2.0);
        matrix_element += step * current_weight(xi) * c.re;
        scalar_matrix_element += step * current_weight(xi) * (psi_p - psi_m);
    }

    Ok(ExchangeReport {
        two_s,
        transpose_sign: t_sign,
        exchange_sign: s_x,
        max_amplitude,
        matrix_element,
        scalar_matrix_element,
        abs_diff: (matrix_element - scalar_matrix_element).abs(),
        profile,
        grid,
        max_imag,
    })
}
