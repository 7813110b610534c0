//! `antisquare`: analysis, generation, searches and table reproduction.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use antisquare::search::ConstraintSet;
use antisquare::{Error, PowerBound};
use clap::{Args, Parser, Subcommand};

/// Environment variable holding the default node budget.
pub const BUDGET_ENV: &str = "ANTISQUARE_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "antisquare", version, about = "Antisquares, powers and morphic words")]
struct Cli {
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ConstraintArgs {
    /// Power bound `p/q` (exponent p/q forbidden) or `p/q+` (only larger ones).
    #[arg(long)]
    pub beta: Option<PowerBound>,
    /// Forbid antisquares of order at least this value.
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Allow at most this many distinct antisquares.
    #[arg(long)]
    pub max_count: Option<usize>,
    /// Forbidden factors, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub forbid: Vec<String>,
    /// Alphabet size (2 or 3).
    #[arg(long, default_value_t = 2)]
    pub alphabet: u8,
}

impl ConstraintArgs {
    pub fn is_empty(&self) -> bool {
        self.beta.is_none() && self.max_order.is_none() && self.max_count.is_none() && self.forbid.is_empty()
    }

    /// Validated constraints; searches and counts need at least one.
    pub fn build(&self) -> antisquare::Result<ConstraintSet> {
        let c = self.build_unchecked()?;
        c.validate()?;
        Ok(c)
    }

    /// Constraints for checking words, possibly empty.
    pub fn build_unchecked(&self) -> antisquare::Result<ConstraintSet> {
        let mut c = ConstraintSet { alphabet_size: self.alphabet, ..ConstraintSet::default() };
        c.power = self.beta;
        c.max_antisquare_order = self.max_order;
        c.max_distinct_antisquares = self.max_count;
        c.forbidding(&self.forbid)
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Node budget; defaults to $ANTISQUARE_BUDGET, then a per-verb default.
    #[arg(long, env = BUDGET_ENV)]
    pub budget: Option<u64>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical exponent, antisquares and constraint check of words.
    Analyze {
        /// Binary words, or files with one word per line.
        #[arg(required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        constraints: ConstraintArgs,
    },
    /// Fixed-point prefix or image of a registered morphism.
    Generate {
        morphism: String,
        /// Prefix length of the fixed point.
        #[arg(long, default_value_t = 100)]
        length: usize,
        /// First letter of the fixed point.
        #[arg(long, default_value_t = 0)]
        seed: u8,
        /// Apply the morphism once to this word instead.
        #[arg(long)]
        apply: Option<String>,
        /// Registry file to use instead of the built-in one.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
    /// Longest word under the constraints, by exhaustive search.
    Search {
        #[command(flatten)]
        constraints: ConstraintArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Checkpoint file, rewritten after every round.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Continue from the checkpoint file if it exists.
        #[arg(long, requires = "checkpoint")]
        resume: bool,
        /// Nodes per checkpoint round.
        #[arg(long, default_value_t = 50_000_000)]
        round: u64,
    },
    /// Number of valid words of each length.
    Count {
        #[command(flatten)]
        constraints: ConstraintArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        n_max: usize,
        /// Count with the factor automaton (forbidden factors only) and
        /// report its growth rate.
        #[arg(long)]
        automaton: bool,
    },
    /// Synchronization, image powers, complement bound and antisquare cap.
    VerifyMorphism {
        /// Registered morphism names; all table rows when omitted.
        names: Vec<String>,
        #[arg(long)]
        registry: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Minimal antisquares by order, against the closed form.
    MinimalAntisquares {
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        /// Also print every word.
        #[arg(long)]
        words: bool,
    },
    /// Structure of the good word w = g(φ^ω(0)).
    FibReport {
        #[arg(long, default_value_t = 100_000)]
        prefix_len: usize,
    },
    /// Recompute the published tables.
    ReproduceTables {
        /// Tables 1 to 6; all when omitted.
        #[arg(long = "table", value_parser = clap::value_parser!(u8).range(1..=6))]
        tables: Vec<u8>,
        #[command(flatten)]
        run: RunArgs,
        /// Skip rows marked slow.
        #[arg(long)]
        skip_slow: bool,
        /// Directory for search checkpoints.
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
        /// Resume searches from checkpoints in the directory.
        #[arg(long, requires = "checkpoint_dir")]
        resume: bool,
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = output::Emitter::new(cli.quiet);
    let result = match cli.command {
        Command::Analyze { inputs, constraints } => commands::analyze(&mut out, &inputs, &constraints),
        Command::Generate { morphism, length, seed, apply, registry } => {
            commands::generate(&mut out, &morphism, length, seed, apply.as_deref(), registry.as_deref())
        }
        Command::Search { constraints, run, checkpoint, resume, round } => {
            commands::search(&mut out, &constraints, &run, checkpoint.as_deref(), resume, round)
        }
        Command::Count { constraints, run, n_max, automaton } => {
            commands::count(&mut out, &constraints, &run, n_max, automaton)
        }
        Command::VerifyMorphism { names, registry, jobs } => {
            commands::verify_morphisms(&mut out, &names, registry.as_deref(), jobs)
        }
        Command::MinimalAntisquares { max_order, words } => commands::minimal(&mut out, max_order, words),
        Command::FibReport { prefix_len } => commands::fib_report(&mut out, prefix_len),
        Command::ReproduceTables { tables, run, skip_slow, checkpoint_dir, resume, registry } => {
            let opts = commands::TableOptions { tables, run, skip_slow, checkpoint_dir, resume, registry };
            commands::reproduce_tables(&mut out, &opts)
        }
    };
    match result {
        Ok(()) => ExitCode::from(out.status().exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Parse(_) | Error::Io(_) => 2,
        Error::Verification(_) | Error::Registry(_) => 1,
        Error::Budget(_) => 3,
    }
}
