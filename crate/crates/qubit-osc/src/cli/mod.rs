//! Command-line front end.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use clap::{Parser, Subcommand};
use std::ffi::OsString;

pub use config::{Format, Overrides, RunConfig, Sweep, SweepParam};
pub use output::{Cell, Table};

#[derive(Debug, Parser)]
#[command(name = "qubit-osc", version, about = "Biased qubit coupled to a damped oscillator: spectra, dynamics, rates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenenergies, Van Vleck and exact
    Spectrum,
    /// P(t) for each solver
    Dynamics,
    /// F(omega) for each solver; discrete peaks go to a sidecar file
    Fourier,
    /// Relaxation and dephasing rates
    Rates,
    /// Symmetrized correlation spectrum S(omega)
    Correlation,
    /// Run the invariant suite; exits 1 on any failure
    Validate {
        /// Flip the sign of W0 in the Van Vleck energies (tests the suite itself)
        #[arg(long, hide = true)]
        inject_w0_flip: bool,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> crate::Result<i32> {
    let cfg = RunConfig::resolve(&cli.overrides)?;
    let (table, code) = match cli.command {
        Command::Spectrum => (commands::spectrum(&cfg)?, 0),
        Command::Dynamics => (commands::dynamics(&cfg)?, 0),
        Command::Fourier => (commands::fourier(&cfg)?, 0),
        Command::Rates => (commands::rates(&cfg)?, 0),
        Command::Correlation => (commands::correlation(&cfg)?, 0),
        Command::Validate { inject_w0_flip } => {
            let (t, ok) = validate::table(&cfg, validate::Mutations { flip_w0: inject_w0_flip })?;
            (t, if ok { 0 } else { 1 })
        }
    };
    output::emit(&table, &cfg)?;
    Ok(code)
}
