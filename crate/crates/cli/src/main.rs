//! `charfluct`: verification suites, exact diagnostics and Monte-Carlo fluctuation reports
//! for characters of symmetric groups.
//!
//! Exit codes: 0 pass, 1 identity failure or incomplete run, 2 statistical failure (with
//! `sample --max-z`), 64 usage error.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};
use commands::Outcome;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 64;

/// A mistake in the invocation or the configuration.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(name = "charfluct", version, about = "Character fluctuations of symmetric groups: exact identities and Monte-Carlo checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check products of normalized class indicators and the fat-partition cycle types
    VerifyAlgebra(commands::VerifyAlgebraArgs),
    /// Check the three cumulant species and the transition-measure identities
    VerifyCumulants(commands::VerifyCumulantsArgs),
    /// Exact factorization diagnostics, cumulants and expected free cumulants
    Exact(config::Overrides),
    /// Monte-Carlo fluctuation report
    Sample {
        #[command(flatten)]
        overrides: config::Overrides,
        /// Exit with status 2 if a statistic lies more than this many standard errors from its prediction
        #[arg(long)]
        max_z: Option<f64>,
    },
    /// Combine report CSV files
    ReportMerge(commands::ReportMergeArgs),
}

fn is_usage(e: &anyhow::Error) -> bool {
    use charfluct::Error as E;
    if e.downcast_ref::<UsageError>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<E>(),
        Some(E::InvalidModel(_) | E::Parse(_) | E::ExactModeOnly(_) | E::ExactBound { .. } | E::InsufficientSamples(_))
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::VerifyAlgebra(args) => commands::verify_algebra_cmd(args),
        Command::VerifyCumulants(args) => commands::verify_cumulants_cmd(args),
        Command::Exact(overrides) => commands::exact_cmd(overrides),
        Command::Sample { overrides, max_z } => commands::sample_cmd(overrides, *max_z),
        Command::ReportMerge(args) => commands::report_merge_cmd(args),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::IdentityFailure) => ExitCode::from(1),
        Ok(Outcome::StatisticalFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { 1 })
        }
    }
}
