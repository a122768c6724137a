//! Command-line driver for the galispin-core solvers.
//!
//! One binary, six subcommands, machine-readable output only: JSON for
//! reports, CSV for the phase-shift sweep. Identical configuration gives
//! byte-identical output.

mod config;
mod run;

use clap::{Parser, Subcommand};

use config::{CliError, FfArg, NormArg, RunConfig};
use run::{Command, OracleWhich};

#[derive(Parser)]
#[command(
    name = "galispin",
    version,
    about = "Bound states, P-wave scattering and brute-force cross-checks \
             for a Galilean spin-s pairing model",
    long_about = "Bound states, P-wave scattering and brute-force cross-checks for a \
                  Galilean spin-s pairing model.\n\n\
                  Units: hbar = 1; the defaults set the mass and the regulator scale to 1. \
                  Positive lambda is attractive; a bound state exists once \
                  lambda * 2^(2s) exceeds the critical value (about 177.65 for the \
                  default sharp regulator). The default coupling binds at \
                  kappa = 1/2, i.e. omega = -1/4.\n\n\
                  A JSON config file (--config) may supply any flag; explicit \
                  command-line values win. Exit codes: 0 success, 1 bad input, \
                  2 numerical failure."
)]
struct Cli {
    /// JSON config file supplying any flag; command-line values win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<String>,

    /// Print the merged configuration as JSON and exit without running.
    #[arg(long, global = true)]
    dump_config: bool,

    /// Attach threshold-integral diagnostics to JSON outputs (bound, erfit).
    #[arg(long, global = true)]
    dump_integrals: bool,

    /// Particle mass.
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    m: Option<f64>,

    /// Coupling strength; positive attracts.
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    lambda: Option<f64>,

    /// Twice the spin, as an integer (1..=64).
    #[arg(long = "two-s", global = true, value_name = "INT")]
    two_s: Option<u32>,

    /// Regulator family.
    #[arg(long, global = true, value_enum)]
    ff: Option<FfArg>,

    /// Regulator momentum scale.
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    cutoff: Option<f64>,

    /// Root-finding tolerance; quadrature refines to max(tol, 1e-12).
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    tol: Option<f64>,

    /// Amplitude normalization: "unitary" restores the on-shell factor so
    /// |S| = 1 exactly; "bare" keeps the closed form as printed.
    #[arg(long, global = true, value_enum)]
    norm: Option<NormArg>,

    /// Lower edge of the momentum window; also the probe momentum for
    /// `oracle ls` (default there: 0.3 * cutoff).
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    kmin: Option<f64>,

    /// Upper edge of the momentum window (must stay below a sharp cutoff).
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    kmax: Option<f64>,

    /// Number of momentum samples in the window.
    #[arg(long, global = true, value_name = "INT")]
    nk: Option<usize>,

    /// Oracle grid size (defaults: 200 for `ls`, 400 for `grid`, 48 for
    /// `exchange`).
    #[arg(long = "grid-n", global = true, value_name = "INT")]
    grid_n: Option<usize>,

    /// Oracle grid ceiling: must equal a sharp cutoff, and be at least
    /// five cutoffs for the soft families.
    #[arg(long, global = true, value_name = "F", allow_hyphen_values = true)]
    qmax: Option<f64>,

    /// Seed for the randomized spinor checks.
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,

    /// Largest 2s exercised by spinor-check (1..=8).
    #[arg(long = "max-two-s", global = true, value_name = "INT")]
    max_two_s: Option<u32>,

    /// Unwrap the phase column into a curve continuous in k instead of the
    /// principal branch (-pi/2, pi/2].
    #[arg(long, global = true)]
    unwrap: bool,

    /// Output path; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,

    #[command(subcommand)]
    cmd: CliCmd,
}

#[derive(Subcommand)]
enum CliCmd {
    /// Randomized identity checks on the spinor layer (JSON).
    SpinorCheck,
    /// Solve the two-particle bound state (JSON).
    Bound,
    /// Sweep the odd-channel phase shift over a momentum window (CSV).
    Phase,
    /// Fit the threshold expansion and compare with the closed forms (JSON).
    Erfit,
    /// Independent grid solvers cross-checking the closed-form path (JSON).
    Oracle {
        #[arg(value_enum)]
        which: OracleWhich,
    },
    /// Run every subcommand on one configuration (single JSON document).
    All,
}

fn cli_to_config(cli: &Cli) -> RunConfig {
    RunConfig {
        m: cli.m,
        lambda: cli.lambda,
        two_s: cli.two_s,
        ff: cli.ff,
        cutoff: cli.cutoff,
        tol: cli.tol,
        norm: cli.norm,
        kmin: cli.kmin,
        kmax: cli.kmax,
        nk: cli.nk,
        grid_n: cli.grid_n,
        qmax: cli.qmax,
        seed: cli.seed,
        max_two_s: cli.max_two_s,
        unwrap: cli.unwrap.then_some(true),
        out: cli.out.clone(),
    }
}

fn run_cli(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let merged = cli_to_config(&cli).merged_over(file);

    if cli.dump_config {
        let mut s = serde_json::to_string_pretty(&merged)
            .map_err(|e| CliError::Validation(format!("config: {e}")))?;
        s.push('\n');
        print!("{s}");
        return Ok(());
    }

    let cmd = match cli.cmd {
        CliCmd::SpinorCheck => Command::SpinorCheck,
        CliCmd::Bound => Command::Bound,
        CliCmd::Phase => Command::Phase,
        CliCmd::Erfit => Command::Erfit,
        CliCmd::Oracle { which } => Command::Oracle(which),
        CliCmd::All => Command::All,
    };
    run::dispatch(&cmd, &merged, cli.dump_integrals)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run_cli(cli) {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
