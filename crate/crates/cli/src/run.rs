//! Command bodies. Every command renders its full output into a string
//! first, so writing to a file and writing to stdout produce the same
//! bytes and repeated runs are byte-identical.

use std::f64::consts::{FRAC_PI_2, PI};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use galispin_core::oracle::{
    exchange_selection_rule, grid_bound_state, ls_phase_shift, trial_even, trial_odd, GridScheme,
    GridSpec, OracleError,
};
use galispin_core::quadrature::{kernel_integral, zeta_integral, QuadratureConfig};
use galispin_core::spinor::checks::run_checks;
use galispin_core::two_body::{
    effective_range_closed_form, effective_range_fit, existence_margin, phase_shift,
    solve_bound_state, TwoBodyError,
};
use galispin_core::ModelParams;

use crate::config::{CliError, RunConfig};

/// Documented oracle tolerances at the default grid sizes.
const LS_TOL_RAD: f64 = 1e-4;
const GRID_REL_TOL: f64 = 1e-3;
const EXCHANGE_TOL: f64 = 1e-14;
const SPINOR_TRIALS: usize = 40;

pub fn dispatch(cmd: &Command, cfg: &RunConfig, dump_integrals: bool) -> Result<(), CliError> {
    let text = match cmd {
        Command::SpinorCheck => render_json(&spinor_check(cfg)?)?,
        Command::Bound => render_json(&bound(cfg, dump_integrals)?)?,
        Command::Phase => phase_csv(cfg)?,
        Command::Erfit => render_json(&erfit(cfg, dump_integrals)?)?,
        Command::Oracle(which) => render_json(&oracle(cfg, *which)?)?,
        Command::All => render_json(&all(cfg, dump_integrals)?)?,
    };
    emit(&cfg.out, &text)
}

#[derive(Debug, Clone, Copy)]
pub enum Command {
    SpinorCheck,
    Bound,
    Phase,
    Erfit,
    Oracle(OracleWhich),
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OracleWhich {
    Ls,
    Grid,
    Exchange,
    All,
}

fn emit(out: &Option<String>, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("out: cannot write {path}: {e}"))),
    }
}

fn render_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Numerical(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// The quadrature refines down to the requested tolerance, floored where
/// panel roundoff takes over.
fn quad(cfg: &RunConfig) -> Result<QuadratureConfig, CliError> {
    Ok(QuadratureConfig {
        rel_tol: cfg.tol()?.max(1e-12),
        ..QuadratureConfig::default()
    })
}

#[derive(Serialize)]
struct Integrals {
    form_factor_norm_sq: f64,
    existence_margin: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    kernel_at_omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    zeta_at_omega: Option<f64>,
}

fn integrals(params: &ModelParams, omega: Option<f64>, q: &QuadratureConfig) -> Integrals {
    let ff = &params.form_factor;
    Integrals {
        form_factor_norm_sq: ff.norm_sq_integral(),
        existence_margin: existence_margin(params),
        kernel_at_omega: omega.map(|w| kernel_integral(ff, params.mass, w, q).value),
        zeta_at_omega: omega.map(|w| zeta_integral(ff, params.mass, w, q).value),
    }
}

#[derive(Serialize)]
struct CheckLineOut {
    name: String,
    worst: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct SpinorOut {
    max_two_s: u32,
    trials: usize,
    seed: u64,
    all_passed: bool,
    lines: Vec<CheckLineOut>,
}

fn spinor_check(cfg: &RunConfig) -> Result<SpinorOut, CliError> {
    let max_two_s = cfg.max_two_s()?;
    let seed = cfg.seed();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let report = run_checks(max_two_s, SPINOR_TRIALS, &mut rng);
    Ok(SpinorOut {
        max_two_s: report.max_two_s,
        trials: report.trials,
        seed,
        all_passed: report.all_passed,
        lines: report
            .lines
            .into_iter()
            .map(|l| CheckLineOut {
                name: l.name,
                worst: l.worst,
                tolerance: l.tolerance,
                passed: l.passed,
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct BoundOut {
    omega: f64,
    kappa: f64,
    residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    integrals: Option<Integrals>,
}

fn bound(cfg: &RunConfig, dump: bool) -> Result<BoundOut, CliError> {
    let params = cfg.model()?;
    let q = quad(cfg)?;
    let state = solve_bound_state(&params, cfg.tol()?, &q)?;
    Ok(BoundOut {
        omega: state.omega,
        kappa: state.kappa,
        residual: state.residual,
        integrals: dump.then(|| integrals(&params, Some(state.omega), &q)),
    })
}

struct PhaseRow {
    k: f64,
    delta: f64,
    sin2: f64,
    k3_cot: f64,
    unitarity: f64,
}

fn phase_rows(cfg: &RunConfig) -> Result<Vec<PhaseRow>, CliError> {
    let params = cfg.model()?;
    let (kmin, kmax, nk) = cfg.window(0.01, 0.9, 50)?;
    let norm = cfg.norm();
    let q = quad(cfg)?;
    let mut rows = Vec::with_capacity(nk);
    for i in 0..nk {
        let k = kmin + (kmax - kmin) * i as f64 / (nk - 1) as f64;
        let p = phase_shift(&params, k, norm, &q)?;
        rows.push(PhaseRow {
            k,
            delta: p.delta,
            sin2: p.sin_sq_delta,
            k3_cot: p.k3_cot_delta,
            unitarity: p.unitarity_residual,
        });
    }
    if cfg.unwrap_phase() {
        unwrap_deltas(&mut rows);
    }
    Ok(rows)
}

/// Continuity in k: the branch is (-pi/2, pi/2] but the physical phase is
/// continuous modulo pi, so shift each point by the multiple of pi that
/// keeps the curve connected. cot(delta) is pi-periodic, so the other
/// columns are untouched.
fn unwrap_deltas(rows: &mut [PhaseRow]) {
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for row in rows.iter_mut() {
        let mut d = row.delta + offset;
        if let Some(p) = prev {
            while d - p > FRAC_PI_2 {
                offset -= PI;
                d -= PI;
            }
            while p - d > FRAC_PI_2 {
                offset += PI;
                d += PI;
            }
        }
        row.delta = d;
        prev = Some(d);
    }
}

pub const PHASE_HEADER: &str = "k, delta1_rad, sin2_delta1, k3_cot_delta1, unitarity_residual";

fn phase_csv(cfg: &RunConfig) -> Result<String, CliError> {
    let rows = phase_rows(cfg)?;
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(PHASE_HEADER);
    s.push('\n');
    for r in &rows {
        s.push_str(&format!(
            "{:.16e}, {:.16e}, {:.16e}, {:.16e}, {:.16e}\n",
            r.k, r.delta, r.sin2, r.k3_cot, r.unitarity
        ));
    }
    Ok(s)
}

#[derive(Serialize)]
struct PhaseRowOut {
    k: f64,
    delta1_rad: f64,
    sin2_delta1: f64,
    /// Null when the phase vanishes identically.
    k3_cot_delta1: Option<f64>,
    unitarity_residual: f64,
}

fn phase_json(cfg: &RunConfig) -> Result<Vec<PhaseRowOut>, CliError> {
    Ok(phase_rows(cfg)?
        .into_iter()
        .map(|r| PhaseRowOut {
            k: r.k,
            delta1_rad: r.delta,
            sin2_delta1: r.sin2,
            k3_cot_delta1: r.k3_cot.is_finite().then_some(r.k3_cot),
            unitarity_residual: r.unitarity,
        })
        .collect())
}

#[derive(Serialize)]
struct ErfitOut {
    inv_a_fit: f64,
    r0_fit: f64,
    /// Closed forms need the bound state; null below the critical coupling.
    inv_a_closed: Option<f64>,
    r0_closed: Option<f64>,
    fit_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    integrals: Option<Integrals>,
}

fn erfit(cfg: &RunConfig, dump: bool) -> Result<ErfitOut, CliError> {
    let params = cfg.model()?;
    let (kmin, kmax, nk) = cfg.window(0.01, 0.1, 40)?;
    let q = quad(cfg)?;
    let fit = effective_range_fit(&params, kmin, kmax, nk, cfg.norm(), &q)?;
    let closed = match effective_range_closed_form(&params, cfg.tol()?, &q) {
        Ok(c) => Some(c),
        Err(TwoBodyError::NoBoundState { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let omega = closed.as_ref().map(|c| c.bound.omega);
    Ok(ErfitOut {
        inv_a_fit: fit.er.inv_scattering_length,
        r0_fit: fit.er.effective_range,
        inv_a_closed: closed.as_ref().map(|c| c.er.inv_scattering_length),
        r0_closed: closed.as_ref().map(|c| c.er.effective_range),
        fit_residual: fit.max_residual,
        integrals: dump.then(|| integrals(&params, omega, &q)),
    })
}

#[derive(Serialize)]
struct OracleOut {
    name: &'static str,
    grid_n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    two_s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trial: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff: Option<f64>,
    tolerance: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    abs_diff_refined: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    negative_levels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

fn oracle_ls(cfg: &RunConfig) -> Result<OracleOut, CliError> {
    let params = cfg.model()?;
    let n = cfg.grid_n(200, 16)?;
    let q_max = cfg.qmax()?;
    let k = match cfg.kmin {
        Some(k) => k,
        None => 0.3 * cfg.cutoff()?,
    };
    if !(k.is_finite() && k > 0.0 && k < q_max) {
        return Err(CliError::Validation(format!(
            "kmin: probe momentum {k} must lie inside (0, qmax = {q_max})"
        )));
    }
    let q = quad(cfg)?;
    let spec = GridSpec {
        n_points: n,
        q_max,
        scheme: GridScheme::GaussLegendreMapped,
    };
    let report = ls_phase_shift(&params, k, &spec, &q)?;
    let refined = ls_phase_shift(
        &params,
        k,
        &GridSpec {
            n_points: 2 * n,
            q_max,
            scheme: GridScheme::GaussLegendreMapped,
        },
        &q,
    )?;
    Ok(OracleOut {
        name: "scattering_phase",
        grid_n: n,
        q_max: Some(q_max),
        k: Some(k),
        two_s: None,
        trial: None,
        oracle_value: Some(report.oracle_value),
        analytic_value: Some(report.analytic_value),
        abs_diff: Some(report.abs_diff),
        tolerance: LS_TOL_RAD,
        passed: report.abs_diff <= LS_TOL_RAD,
        abs_diff_refined: Some(refined.abs_diff),
        negative_levels: None,
        grid_margin: None,
        note: None,
    })
}

fn oracle_grid(cfg: &RunConfig) -> Result<OracleOut, CliError> {
    let params = cfg.model()?;
    let n = cfg.grid_n(400, 16)?;
    let q_max = cfg.qmax()?;
    let q = quad(cfg)?;
    let spec = GridSpec {
        n_points: n,
        q_max,
        scheme: GridScheme::GaussLegendreMapped,
    };
    let margin = existence_margin(&params);
    match grid_bound_state(&params, &spec, &q) {
        Ok(r) => {
            let tol = GRID_REL_TOL * r.report.analytic_value.abs();
            Ok(OracleOut {
                name: "bound_state_energy",
                grid_n: n,
                q_max: Some(q_max),
                k: None,
                two_s: None,
                trial: None,
                oracle_value: Some(r.report.oracle_value),
                analytic_value: Some(r.report.analytic_value),
                abs_diff: Some(r.report.abs_diff),
                tolerance: tol,
                passed: r.report.abs_diff <= tol,
                abs_diff_refined: None,
                negative_levels: Some(r.negative_levels),
                grid_margin: Some(r.grid_margin),
                note: None,
            })
        }
        // Below the critical coupling both sides must agree that nothing
        // binds; that agreement is the oracle result.
        Err(OracleError::Solver(_)) | Err(OracleError::TwoBody(TwoBodyError::NoBoundState { .. }))
            if margin < 0.0 =>
        {
            Ok(OracleOut {
                name: "bound_state_energy",
                grid_n: n,
                q_max: Some(q_max),
                k: None,
                two_s: None,
                trial: None,
                oracle_value: None,
                analytic_value: None,
                abs_diff: None,
                tolerance: 0.0,
                passed: true,
                abs_diff_refined: None,
                negative_levels: Some(0),
                grid_margin: Some(margin),
                note: Some("no bound state below the critical coupling, on the grid or in closed form"),
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn oracle_exchange(cfg: &RunConfig) -> Result<Vec<OracleOut>, CliError> {
    let half = cfg.grid_n(48, 4)?;
    let extent = 4.0;
    let mut outs = Vec::new();
    for two_s in [1u32, 2] {
        for (trial_name, trial) in [("even", trial_even as fn(f64) -> f64), ("odd", trial_odd)] {
            let r = exchange_selection_rule(two_s, trial, half, extent)?;
            let even = trial_name == "even";
            let passed = r.abs_diff <= EXCHANGE_TOL
                && (!even || r.max_amplitude.abs() <= EXCHANGE_TOL)
                && (even || r.matrix_element != 0.0);
            outs.push(OracleOut {
                name: "exchange_selection_rule",
                grid_n: half,
                q_max: None,
                k: None,
                two_s: Some(two_s),
                trial: Some(trial_name),
                oracle_value: Some(r.matrix_element),
                analytic_value: Some(r.scalar_matrix_element),
                abs_diff: Some(r.abs_diff),
                tolerance: EXCHANGE_TOL,
                passed,
                abs_diff_refined: None,
                negative_levels: None,
                grid_margin: None,
                note: None,
            });
        }
    }
    Ok(outs)
}

fn oracle(cfg: &RunConfig, which: OracleWhich) -> Result<Vec<OracleOut>, CliError> {
    match which {
        OracleWhich::Ls => Ok(vec![oracle_ls(cfg)?]),
        OracleWhich::Grid => Ok(vec![oracle_grid(cfg)?]),
        OracleWhich::Exchange => oracle_exchange(cfg),
        OracleWhich::All => {
            let mut v = vec![oracle_ls(cfg)?, oracle_grid(cfg)?];
            v.extend(oracle_exchange(cfg)?);
            Ok(v)
        }
    }
}

#[derive(Serialize)]
struct AllOut {
    spinor_check: SpinorOut,
    bound: BoundOut,
    phase: Vec<PhaseRowOut>,
    erfit: ErfitOut,
    oracle: Vec<OracleOut>,
}

fn all(cfg: &RunConfig, dump: bool) -> Result<AllOut, CliError> {
    Ok(AllOut {
        spinor_check: spinor_check(cfg)?,
        bound: bound(cfg, dump)?,
        phase: phase_json(cfg)?,
        erfit: erfit(cfg, dump)?,
        oracle: oracle(cfg, OracleWhich::All)?,
    })
}
