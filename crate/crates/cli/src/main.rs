//! `ctd`: generate, decompose and check overcomplete order-3 tensors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctd_core::{Error, DEFAULT_COEFF_BOUND, DEFAULT_RETRY_BUDGET};
use serde_json::json;

/// Environment variable that makes `--seed` mandatory for randomized
/// commands.
pub const REQUIRE_SEED_VAR: &str = "CTD_REQUIRE_SEED";

#[derive(Parser, Debug)]
#[command(name = "ctd", version, about = "Exact decomposition of overcomplete order-3 tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Seed for every random draw. Taken from OS entropy when omitted,
    /// unless CTD_REQUIRE_SEED is set.
    #[arg(long)]
    seed: Option<u64>,
    /// Attempts allowed for each randomized stage.
    #[arg(long, default_value_t = DEFAULT_RETRY_BUDGET)]
    retries: usize,
    /// Entries are drawn from [-bound, bound].
    #[arg(long = "coeff-bound", default_value_t = DEFAULT_COEFF_BOUND)]
    coeff_bound: i64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw a planted instance.
    Generate {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        p: usize,
        /// Redraw until slices are invertible and the hypotheses hold.
        #[arg(long, conflicts_with = "conjugated")]
        generic: bool,
        /// Build the slices as top-left blocks of a conjugated diagonal family.
        #[arg(long)]
        conjugated: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Decompose a tensor of the given rank.
    Decompose {
        tensor: PathBuf,
        #[arg(short)]
        r: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exit 0 when the decomposition reassembles the tensor, 1 otherwise.
    Verify {
        tensor: PathBuf,
        decomposition: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Commutator dimensions for `A_k = T_1^{-1} T_{k+1}`.
    Check {
        tensor: PathBuf,
        #[arg(short)]
        r: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Commutator rank lower bounds.
    Bounds {
        tensor: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compute or verify a commuting extension of `T_1^{-1} T_k`.
    Extension {
        #[command(subcommand)]
        action: ExtensionAction,
    },
    /// Pad a tensor to `(I, A_1, ..., A_p)`, raising its rank by `m + n`.
    Gadget {
        tensor: PathBuf,
        /// Decomposition to pad along; taken from the input when it is a
        /// planted instance.
        #[arg(long)]
        decomposition: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Generate and decompose a batch of planted instances.
    Bench {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        r: usize,
        #[arg(short)]
        p: usize,
        /// Number of instances; seeds run from `--seed` upwards.
        #[arg(long, default_value_t = 20)]
        seeds: u64,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum ExtensionAction {
    Compute {
        tensor: PathBuf,
        #[arg(short)]
        r: usize,
        #[command(flatten)]
        common: Common,
    },
    Verify {
        tensor: PathBuf,
        extension: PathBuf,
        /// Also require every `Z_k` to be diagonalizable.
        #[arg(long)]
        require_diagonalizable: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub retry_budget: usize,
    pub coeff_bound: i64,
    pub out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    /// A check ran and came out negative.
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                Error::VerificationFailed(_) => 1,
                Error::HypothesisViolated(_)
                | Error::Singular
                | Error::RankDeficient(_)
                | Error::InconsistentSystem(_)
                | Error::DegenerateInput(_)
                | Error::NormalizationFailure(_)
                | Error::NoInvertibleSpanElement { .. } => 3,
                Error::RetryBudgetExhausted { .. } => 4,
                _ => 2,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Mismatch(_) => "mismatch",
        }
    }
}

fn config(common: &Common, randomized: bool) -> Result<RunConfig, CliError> {
    let Format::Json = common.format;
    if common.retries == 0 {
        return Err(CliError::Usage("--retries must be at least 1".into()));
    }
    if common.coeff_bound < 1 {
        return Err(CliError::Usage("--coeff-bound must be at least 1".into()));
    }
    let seed = match common.seed {
        Some(s) => s,
        None if randomized && std::env::var_os(REQUIRE_SEED_VAR).is_some() => {
            return Err(CliError::Usage(format!("--seed is required when {REQUIRE_SEED_VAR} is set")));
        }
        None => rand::random(),
    };
    Ok(RunConfig {
        seed,
        retry_budget: common.retries,
        coeff_bound: common.coeff_bound,
        out: common.out.clone(),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { n, r, p, generic, conjugated, common } => {
            commands::generate(&config(&common, true)?, n, r, p, generic, conjugated)
        }
        Command::Decompose { tensor, r, common } => commands::decompose(&config(&common, true)?, &tensor, r),
        Command::Verify { tensor, decomposition, common } => {
            commands::verify(&config(&common, false)?, &tensor, &decomposition)
        }
        Command::Check { tensor, r, common } => commands::check(&config(&common, false)?, &tensor, r),
        Command::Bounds { tensor, common } => commands::bounds(&config(&common, false)?, &tensor),
        Command::Extension { action } => match action {
            ExtensionAction::Compute { tensor, r, common } => {
                commands::extension_compute(&config(&common, false)?, &tensor, r)
            }
            ExtensionAction::Verify { tensor, extension, require_diagonalizable, common } => {
                commands::extension_verify(&config(&common, false)?, &tensor, &extension, require_diagonalizable)
            }
        },
        Command::Gadget { tensor, decomposition, common } => {
            commands::gadget(&config(&common, false)?, &tensor, decomposition.as_deref())
        }
        Command::Bench { n, r, p, seeds, threads, common } => {
            commands::bench(&config(&common, true)?, n, r, p, seeds, threads)
        }
    }
}

fn report_error(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = json!({ "error": { "kind": kind, "message": message, "exit_code": code } });
    eprintln!("{}", serde_json::to_string_pretty(&body).expect("plain json"));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report_error("usage", e.to_string().trim(), 2),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report_error(e.kind(), &e.to_string(), e.exit_code()),
    }
}
