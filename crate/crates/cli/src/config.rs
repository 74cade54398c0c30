//! Run configuration shared by all subcommands.
//!
//! Precedence is flag, then environment variable, then any value carried by an
//! input file, then the built-in default.

use ciani_core::theta::Thresholds;
use clap::{Args, ValueEnum};

use crate::error::CliError;

pub const DEFAULT_PRECISION: usize = 256;
/// Theta-dependent commands refuse anything lower.
pub const MIN_THETA_PRECISION: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Working precision in bits.
    #[arg(long, global = true, env = "CIANI_PREC")]
    pub prec: Option<usize>,

    /// Output format; `disc` defaults to text, everything else to JSON.
    #[arg(long, global = true, env = "CIANI_FORMAT", value_enum)]
    pub format: Option<OutputFormat>,

    /// Seed for randomized suites.
    #[arg(long, global = true, env = "CIANI_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for batch verification; 0 uses every core.
    #[arg(long, global = true, env = "CIANI_WORKERS", default_value_t = 0)]
    pub workers: usize,

    /// `log₂` relative size below which a modular form counts as zero
    /// (default `−p/3`); values above half this exponent count as nonzero.
    #[arg(long, global = true, env = "CIANI_VANISH", allow_negative_numbers = true)]
    pub vanish_threshold: Option<f64>,

    /// Include wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub prec: usize,
    pub vanish_threshold: Option<f64>,
    pub format: Option<OutputFormat>,
    pub seed: u64,
    pub workers: usize,
    pub timings: bool,
}

impl RunConfig {
    /// `file_prec` is a precision recorded in an input file, used only when
    /// neither the flag nor the environment set one.
    pub fn resolve(args: &GlobalArgs, file_prec: Option<usize>) -> Self {
        Self {
            prec: args.prec.or(file_prec).unwrap_or(DEFAULT_PRECISION),
            vanish_threshold: args.vanish_threshold,
            format: args.format,
            seed: args.seed,
            workers: args.workers,
            timings: args.timings,
        }
    }

    pub fn require_theta_precision(&self) -> Result<(), CliError> {
        if self.prec < MIN_THETA_PRECISION {
            return Err(CliError::usage("precision_too_low", format!("precision {} is below {MIN_THETA_PRECISION} bits", self.prec)));
        }
        Ok(())
    }

    pub fn thresholds(&self) -> Thresholds {
        match self.vanish_threshold {
            Some(v) => Thresholds { zero_log2: v, nonzero_log2: v / 2.0 },
            None => Thresholds::for_precision(self.prec),
        }
    }
}
