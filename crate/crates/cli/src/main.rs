//! `unialg`: command-line front end.
//!
//! Exit codes: 0 success or property holds, 1 property fails or witness
//! found, 2 input or usage error, 3 budget exhausted or undecided.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use unialg::{Budget, ClosureConfig, Error, Parallelism};

#[derive(Debug, Parser)]
#[command(name = "unialg", version, about = "Finite universal algebra workbench")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Maximum number of tuples inserted by one closure run.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_INSERTIONS)]
    pub budget: u64,
    /// Maximum number of operation applications by one closure run.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_OP_APPLICATIONS)]
    pub max_ops: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = ParallelismArg::Parallel)]
    pub parallelism: ParallelismArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParallelismArg {
    Sequential,
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    ZeroTest,
}

/// Algebras are given as a file path or `builtin:NAME`.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an algebra and print it in canonical form.
    Parse { input: String },
    /// List all congruences in lattice order.
    Con {
        input: String,
        /// Refuse lattices with more members than this.
        #[arg(long, default_value_t = unialg::lattice::DEFAULT_CON_BOUND)]
        bound: usize,
    },
    /// List all subuniverses, the empty one included when there are no constants.
    Sub {
        input: String,
        /// Refuse universes with more elements than this.
        #[arg(long, default_value_t = unialg::lattice::DEFAULT_SUB_BOUND)]
        bound: usize,
    },
    /// Term-condition commutator [alpha, beta], or with --higher the
    /// two-term higher commutator of the given congruences.
    Commutator {
        input: String,
        #[arg(long, conflicts_with = "higher", requires = "beta")]
        alpha: Option<String>,
        #[arg(long, conflicts_with = "higher", requires = "alpha")]
        beta: Option<String>,
        #[arg(long)]
        higher: bool,
        /// Congruence: 0, 1, seed pairs a-b,c-d, or blocks like 0 3|1 4.
        /// Repeat for distinct congruences, or give one with --dim.
        #[arg(long, requires = "higher")]
        theta: Vec<String>,
        /// Repeat a single --theta this many times.
        #[arg(long, requires = "higher")]
        dim: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact, requires = "higher")]
        mode: ModeArg,
    },
    /// Decide whether theta is supernilpotent of class cls.
    Supernil {
        input: String,
        #[arg(long)]
        cls: usize,
        #[arg(long, default_value = "1")]
        theta: String,
    },
    /// Build and certify the retraction onto a subalgebra.
    Retract {
        input: String,
        /// Generators of B, e.g. 0,2.
        #[arg(long)]
        subalgebra: String,
        /// Fixed class; without it the least supernilpotent class of 1 up
        /// to --max-cls is searched.
        #[arg(long)]
        cls: Option<usize>,
        /// Used with --cls.
        #[arg(long, requires = "cls")]
        theta: Option<String>,
        #[arg(long, conflicts_with = "cls", default_value_t = unialg::retract::DEFAULT_MAX_CLS)]
        max_cls: usize,
    },
    /// Replay every computational claim about the Z6 expansion.
    VerifyPaperExample,
}

/// Non-error result of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Fails,
    Undecided,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::Fails => 1,
            Outcome::Undecided => 3,
        }
    }
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted | Error::TooLarge { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl GlobalOpts {
    fn config(&self) -> Result<ClosureConfig, Failure> {
        Ok(ClosureConfig {
            budget: Budget::new(self.budget, self.max_ops)?,
            parallelism: match self.parallelism {
                ParallelismArg::Sequential => Parallelism::Sequential,
                ParallelismArg::Parallel => Parallelism::Parallel,
            },
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = String::new();
    let result = cli
        .global
        .config()
        .and_then(|config| commands::run(&cli.command, &config, cli.global.format, &mut out));
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
