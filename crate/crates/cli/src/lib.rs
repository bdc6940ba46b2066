//! The `syncdelay` command line. [`run`] takes the full argument vector and
//! returns the exit code with everything that would be printed.
//!
//! Exit codes: 2 for unreadable input or bad options, 1 for a negative
//! verdict or a failed verification, 0 otherwise.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use syncdelay::config::RunConfig;
use syncdelay::varieties::VarietySpec;
use syncdelay::Error;

mod commands;
pub mod report;

pub use report::Report;

#[derive(Parser, Debug)]
#[command(name = "syncdelay", version, about = "Syntactic monoids, Rees decompositions and group-star expressions")]
pub struct Cli {
    /// Print the report as a single JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized check. SYNCDELAY_SEED takes precedence.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest number of elements of any constructed monoid.
    #[arg(long, global = true)]
    pub size_cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Syntactic monoid, maximal subgroups and variety verdicts of a DFA.
    Analyze {
        #[arg(long)]
        dfa: PathBuf,
        /// trivial | abelian | solvable | solvable-q=<q> | all (repeatable)
        #[arg(long = "variety")]
        varieties: Vec<String>,
    },
    /// Local Rees decomposition of a monoid, verified.
    Decompose {
        #[arg(long)]
        monoid: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also build and check the single Rees extension the tree describes.
        #[arg(long)]
        flatten: bool,
    },
    /// Group-star expression for the language of a DFA.
    Synthesize {
        #[arg(long)]
        dfa: PathBuf,
        /// trivial | cyclic:N | sym:N | file:PATH
        #[arg(long)]
        group: String,
        /// Also synthesize the infinite-word language read by the DFA as a
        /// Büchi automaton, and evaluate the lassos listed in this file.
        #[arg(long)]
        omega: Option<PathBuf>,
        /// Write the expression to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest tree size printed inline.
        #[arg(long, default_value_t = 400)]
        print_limit: u64,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
    },
    /// Prefix-code test and least synchronization delay.
    CheckCode {
        #[arg(long)]
        dfa: PathBuf,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
    },
    /// Language equivalence of an expression and a DFA.
    VerifyExpr {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long)]
        dfa: PathBuf,
    },
    /// Prefix-code, delay and variety checks on every star of an expression.
    ValidateExpr {
        #[arg(long)]
        expr: PathBuf,
        #[arg(long)]
        variety: String,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
        /// Letters in order, e.g. `abc`. Inferred from the expression if omitted.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Expansion of a monoid by sets of visited prefix values.
    Expand {
        #[arg(long)]
        monoid: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Reachable)]
        mode: Mode,
        #[arg(long)]
        dfa: Option<PathBuf>,
    },
    /// Concatenation of two languages through a pair-set product.
    Product {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, value_enum, default_value_t = Via::Schutzenberger)]
        via: Via,
    },
    /// The two-marker language over an S3 alphabet, end to end.
    DemoExample14,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Reachable,
    Full,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Via {
    Schutzenberger,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) enum Fail {
    Input(String),
    Run(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::AlphabetMismatch(_) => Fail::Input(e.to_string()),
            _ => Fail::Run(e.to_string()),
        }
    }
}

pub(crate) type CmdResult = std::result::Result<(Report, bool), Fail>;

pub(crate) fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), Fail> {
    std::fs::write(path, text).map_err(|e| Fail::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn variety(s: &str) -> Result<VarietySpec, Fail> {
    s.parse().map_err(|e: Error| Fail::Input(e.to_string()))
}

pub fn run(args: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut config = RunConfig::default();
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Some(c) = cli.size_cap {
        config.limits.size_cap = c;
    }
    let config = match config.with_env() {
        Ok(c) => c,
        Err(e) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    match commands::dispatch(&cli.command, &config) {
        Ok((report, ok)) => Outcome {
            code: if ok { 0 } else { 1 },
            stdout: report.render(cli.json),
            stderr: String::new(),
        },
        Err(Fail::Input(m)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Fail::Run(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}
