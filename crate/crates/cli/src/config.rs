//! Run configuration: a JSON file may supply any flag, command-line values
//! win, and per-command defaults fill the rest. All quantities are in model
//! units with hbar = 1; the defaults put the regulator scale and the mass
//! at 1.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use galispin_core::two_body::SpinLabel;
use galispin_core::{FormFactor, FormFactorFamily, ModelParams, Normalization};

/// Coupling that binds the default configuration at kappa = 1/2, so a bare
/// `galispin bound` reproduces the reference energy -1/4.
pub const REFERENCE_LAMBDA: f64 = 133.5372935093545;

#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent input; the message names the offending key.
    Validation(String),
    /// The solvers gave up: non-convergence, or no bound state where one
    /// is required.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<galispin_core::two_body::TwoBodyError> for CliError {
    fn from(e: galispin_core::two_body::TwoBodyError) -> Self {
        use galispin_core::two_body::TwoBodyError as E;
        match e {
            E::IllConditionedFit { ratio, ratio_needed } => CliError::Validation(format!(
                "kmin/kmax: fit window too narrow (kmax/kmin = {ratio:.3}, need >= {ratio_needed})"
            )),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<galispin_core::oracle::OracleError> for CliError {
    fn from(e: galispin_core::oracle::OracleError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FfArg {
    Sharp,
    Gauss,
    Rational,
}

impl FfArg {
    pub fn family(self) -> FormFactorFamily {
        match self {
            FfArg::Sharp => FormFactorFamily::SharpCutoff,
            FfArg::Gauss => FormFactorFamily::Gaussian,
            FfArg::Rational => FormFactorFamily::Rational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    /// Amplitude as printed in the closed form; |S| drifts from 1.
    Bare,
    /// On-shell factor restored so the S-matrix is exactly unimodular.
    Unitary,
}

impl NormArg {
    pub fn norm(self) -> Normalization {
        match self {
            NormArg::Bare => Normalization::Bare,
            NormArg::Unitary => Normalization::Unitary,
        }
    }
}

/// Every flag as an optional key. Unknown keys in a config file are
/// rejected by name.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ff: Option<FfArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nk: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qmax: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_two_s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unwrap: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    /// Command-line values override file values key by key.
    pub fn merged_over(self, file: RunConfig) -> RunConfig {
        RunConfig {
            m: self.m.or(file.m),
            lambda: self.lambda.or(file.lambda),
            two_s: self.two_s.or(file.two_s),
            ff: self.ff.or(file.ff),
            cutoff: self.cutoff.or(file.cutoff),
            tol: self.tol.or(file.tol),
            norm: self.norm.or(file.norm),
            kmin: self.kmin.or(file.kmin),
            kmax: self.kmax.or(file.kmax),
            nk: self.nk.or(file.nk),
            grid_n: self.grid_n.or(file.grid_n),
            qmax: self.qmax.or(file.qmax),
            seed: self.seed.or(file.seed),
            max_two_s: self.max_two_s.or(file.max_two_s),
            unwrap: self.unwrap.or(file.unwrap),
            out: self.out.or(file.out),
        }
    }

    pub fn load(path: &str) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("config: cannot read {path}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config: {path}: {e}")))
    }

    pub fn family(&self) -> FfArg {
        self.ff.unwrap_or(FfArg::Sharp)
    }

    pub fn cutoff(&self) -> Result<f64, CliError> {
        positive(self.cutoff.unwrap_or(1.0), "cutoff")
    }

    pub fn tol(&self) -> Result<f64, CliError> {
        positive(self.tol.unwrap_or(1e-12), "tol")
    }

    pub fn norm(&self) -> Normalization {
        self.norm.unwrap_or(NormArg::Unitary).norm()
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn unwrap_phase(&self) -> bool {
        self.unwrap.unwrap_or(false)
    }

    pub fn max_two_s(&self) -> Result<u32, CliError> {
        let v = self.max_two_s.unwrap_or(8);
        if (1..=8).contains(&v) {
            Ok(v)
        } else {
            Err(CliError::Validation(format!(
                "max_two_s: {v} outside the supported range 1..=8"
            )))
        }
    }

    pub fn model(&self) -> Result<ModelParams, CliError> {
        let m = positive(self.m.unwrap_or(1.0), "m")?;
        let cutoff = self.cutoff()?;
        let lambda = self.lambda.unwrap_or(REFERENCE_LAMBDA);
        if !lambda.is_finite() {
            return Err(CliError::Validation(format!("lambda: {lambda} is not finite")));
        }
        let two_s = self.two_s.unwrap_or(1);
        if !(1..=64).contains(&two_s) {
            return Err(CliError::Validation(format!(
                "two_s: {two_s} outside the supported range 1..=64"
            )));
        }
        Ok(ModelParams::new(
            m,
            lambda,
            SpinLabel::new(two_s),
            FormFactor::new(self.family().family(), cutoff),
        ))
    }

    /// Momentum window for sweeps and fits. The sharp regulator has no
    /// scattering support at or above the cutoff.
    pub fn window(&self, dmin: f64, dmax: f64, dnk: usize) -> Result<(f64, f64, usize), CliError> {
        let kmin = self.kmin.unwrap_or(dmin);
        let kmax = self.kmax.unwrap_or(dmax);
        let nk = self.nk.unwrap_or(dnk);
        if !(kmin.is_finite() && kmin > 0.0) {
            return Err(CliError::Validation(format!("kmin: {kmin} must be positive")));
        }
        if !(kmax.is_finite() && kmax > kmin) {
            return Err(CliError::Validation(format!(
                "kmax: {kmax} must exceed kmin = {kmin}"
            )));
        }
        if self.family() == FfArg::Sharp && kmax >= self.cutoff()? {
            return Err(CliError::Validation(format!(
                "kmax: {kmax} must stay below the sharp cutoff {}",
                self.cutoff()?
            )));
        }
        if nk < 2 {
            return Err(CliError::Validation(format!("nk: {nk} must be at least 2")));
        }
        Ok((kmin, kmax, nk))
    }

    pub fn grid_n(&self, default: usize, least: usize) -> Result<usize, CliError> {
        let n = self.grid_n.unwrap_or(default);
        if n < least {
            return Err(CliError::Validation(format!(
                "grid_n: {n} must be at least {least}"
            )));
        }
        Ok(n)
    }

    /// Grid ceiling for the oracle solvers: the sharp support ends at the
    /// cutoff, soft families need room for their tails.
    pub fn qmax(&self) -> Result<f64, CliError> {
        let cutoff = self.cutoff()?;
        let q = match self.qmax {
            Some(q) => positive(q, "qmax")?,
            None => match self.family() {
                FfArg::Sharp => cutoff,
                _ => 5.0 * cutoff,
            },
        };
        match self.family() {
            FfArg::Sharp => {
                if (q - cutoff).abs() > 1e-12 * cutoff {
                    return Err(CliError::Validation(format!(
                        "qmax: {q} must equal the sharp cutoff {cutoff}"
                    )));
                }
            }
            _ => {
                if q < 5.0 * cutoff {
                    return Err(CliError::Validation(format!(
                        "qmax: {q} must be at least five cutoffs ({})",
                        5.0 * cutoff
                    )));
                }
            }
        }
        Ok(q)
    }
}

fn positive(v: f64, key: &str) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{key}: {v} must be positive and finite")))
    }
}
