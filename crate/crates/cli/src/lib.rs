//! Command-line front end for `ciani-core`: argument parsing, file formats and
//! the exit-code contract (0 success, 1 domain error, 2 usage error,
//! 3 indeterminate classification).

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod selftest;

use clap::{Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::{GlobalArgs, OutputFormat, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ciani", version, about = "Discriminants, theta constants and Jacobian classification for Ciani quartics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminant of a ternary quartic, exactly.
    Disc {
        /// Polynomial text, form JSON, or a file holding either.
        #[arg(long)]
        form: String,
    },
    /// Twist-obstruction invariant and Jacobian label of a Ciani matrix.
    Classify {
        /// Matrix JSON `{"a": [...], "b": [...]}`, `identity`, or a file.
        #[arg(long)]
        matrix: String,
    },
    /// Theta constants.
    Theta {
        #[command(subcommand)]
        command: ThetaCommand,
    },
    /// Product of the even theta constants (χ18 in genus 3).
    Chi18 {
        #[arg(long)]
        tau: String,
    },
    /// Σ140 in genus 3.
    Sigma140 {
        #[arg(long)]
        tau: String,
    },
    /// Decomposable / hyperelliptic / non-hyperelliptic from χ18 and Σ140.
    Igusa {
        #[arg(long)]
        tau: String,
    },
    /// Maximal isotropic subspaces of F2^(2g).
    Isotropic {
        #[command(subcommand)]
        command: IsotropicCommand,
    },
    /// Integer symplectic matrices.
    Symplectic {
        #[command(subcommand)]
        command: SymplecticCommand,
    },
    /// Numerical check of the theta identity for X(m) at three elliptic periods.
    VerifyKlein {
        /// Three elliptic periods, e.g. "0.8i,1.1i,1.3i".
        #[arg(long)]
        tau: Option<String>,
        /// Ciani matrix (JSON or file); required with --corollary.
        #[arg(long)]
        matrix: Option<String>,
        /// Check X(Cof m) = D(m)² numerically via the elliptic factors of Cof m.
        #[arg(long)]
        corollary: bool,
    },
    /// Run the built-in invariant suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = selftest::Suite::All)]
        suite: selftest::Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum ThetaCommand {
    /// One theta constant θ[ε](τ).
    Null {
        /// Characteristic as "ε1,ε2" bit strings, e.g. "101,010".
        #[arg(long = "char")]
        characteristic: String,
        /// τ JSON, a file, or comma-separated diagonal entries.
        #[arg(long)]
        tau: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum IsotropicCommand {
    /// List every maximal isotropic subspace by a basis.
    Enumerate {
        #[arg(long)]
        g: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SymplecticCommand {
    /// Membership in each tracked subgroup.
    Check {
        /// `{"rows": [[...]]}`, a bare array of rows, or a file.
        #[arg(long)]
        matrix: String,
    },
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

fn dispatch(cli: &Cli) -> Result<(Outcome, RunConfig), CliError> {
    let g = &cli.global;
    let cfg = RunConfig::resolve(g, None);
    let out = match &cli.command {
        Command::Disc { form } => commands::disc(form)?,
        Command::Classify { matrix } => commands::classify(matrix)?,
        Command::Theta { command: ThetaCommand::Null { characteristic, tau } } => commands::theta_null_cmd(characteristic, tau, g)?,
        Command::Chi18 { tau } => commands::chi18(tau, g)?,
        Command::Sigma140 { tau } => commands::sigma140_cmd(tau, g)?,
        Command::Igusa { tau } => commands::igusa(tau, g)?,
        Command::Isotropic { command: IsotropicCommand::Enumerate { g: genus } } => commands::isotropic_enumerate(*genus)?,
        Command::Symplectic { command: SymplecticCommand::Check { matrix } } => commands::symplectic_check(matrix)?,
        Command::VerifyKlein { tau, matrix, corollary } => commands::verify_klein(tau.as_deref(), matrix.as_deref(), *corollary, g)?,
        Command::Selftest { suite } => {
            cfg.require_theta_precision()?;
            let r = selftest::run(*suite, selftest::Params { prec: cfg.prec, seed: cfg.seed }, cfg.workers)?;
            Outcome { json: r.json, text: r.text, default_format: OutputFormat::Json, exit: if r.failures == 0 { 0 } else { 1 } }
        }
    };
    Ok((out, cfg))
}

fn render_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Response
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Response { stdout: text, stderr: String::new(), code }
            } else {
                Response { stdout: String::new(), stderr: text, code }
            };
        }
    };
    match dispatch(&cli) {
        Ok((out, cfg)) => {
            let stdout = match cfg.format.unwrap_or(out.default_format) {
                OutputFormat::Json => render_json(&out.json),
                OutputFormat::Text => format!("{}\n", out.text),
            };
            Response { stdout, stderr: String::new(), code: out.exit }
        }
        Err(e) => {
            let stderr = match cli.global.format {
                Some(OutputFormat::Text) => format!("error: {e}\n"),
                _ => render_json(&e.to_json()),
            };
            Response { stdout: String::new(), stderr, code: e.exit_code() }
        }
    }
}
