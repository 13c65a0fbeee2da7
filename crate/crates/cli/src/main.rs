//! `vinegauge`: tail dependence coefficients, limit-set meshes, simulation and
//! self-verification for vine copulas with extreme-value pair copulas.
//!
//! Results go to standard output as JSON or CSV. Errors go to standard error
//! as a JSON object, and the exit status says what went wrong:
//! 0 success, 2 invalid input, 3 numerical failure, 4 failed verification.

mod commands;
mod model;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vinegauge::Error;

use commands::{ContourArgs, EtaArgs, SimulateArgs, TableArgs, VerifyArgs};

#[derive(Parser)]
#[command(name = "vinegauge", version, about)]
struct Cli {
    /// Worker threads for parallel sections. Results do not depend on it.
    #[arg(long, global = true, env = "VINEGAUGE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient of tail dependence of an index set, as JSON.
    Eta(EtaArgs),
    /// Boundary mesh of the unit level set of the gauge, as CSV.
    Contour(ContourArgs),
    /// Sample a vine on Exp(1) margins.
    Simulate(SimulateArgs),
    /// Run the built-in self-checks and print one CSV row per check.
    Verify(VerifyArgs),
    /// Tables of η for D-vines with inverted logistic pair copulas, as CSV.
    Table(TableArgs),
}

/// Everything a command can fail with.
pub enum Failure {
    Model(Error),
    Verification(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Model(e.into())
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_)
        | Error::UnsupportedMeasure(_)
        | Error::DimensionMismatch { .. }
        | Error::InvalidSpec { .. }
        | Error::Io(_) => 2,
        Error::DegenerateConditioner(_) | Error::NonBracketing { .. } | Error::LowData { .. } | Error::Numeric(_) => 3,
    }
}

fn report(f: Failure) -> ExitCode {
    let (body, code) = match f {
        Failure::Model(e) => {
            let mut body = serde_json::json!({ "error": e.to_string() });
            if let Error::InvalidSpec { pointer, .. } = &e {
                body["pointer"] = pointer.clone().into();
            }
            (body, exit_code(&e))
        }
        Failure::Verification(n) => (serde_json::json!({ "error": format!("{n} verification check(s) failed") }), 4),
    };
    eprintln!("{body}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return report(Failure::Model(Error::Domain(format!("cannot set up {n} threads: {e}"))));
        }
    }
    let result = match &cli.command {
        Command::Eta(a) => commands::eta(a),
        Command::Contour(a) => commands::contour(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Verify(a) => commands::verify(a),
        Command::Table(a) => commands::table(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(f),
    }
}
