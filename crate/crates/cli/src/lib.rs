//! Command-line surface over the `lieflag` library.

mod audit;
mod commands;

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};

pub use audit::{audit_document, Check};

#[derive(Parser, Debug)]
#[command(name = "lieflag", version, about = "Weighted diagrams of closed 2-forms on completely solvable Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a document and check its forms and flags.
    Validate { file: String },
    /// Kernel chain, vertex classes and predicates along a flag.
    Diagram {
        file: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        flag: String,
        #[arg(long)]
        contract: bool,
        /// Write a DOT rendering to this path.
        #[arg(long)]
        dot: Option<String>,
        #[arg(long, value_enum, default_value_t = DotKind::Graph)]
        dot_style: DotKind,
        #[arg(long)]
        json: bool,
    },
    /// Deform a semi-simple semi-nilpotent flag into one with a simple diagram.
    Deform {
        file: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        flag: String,
        #[arg(long)]
        json: bool,
    },
    /// Lagrangian subalgebras containing the kernel of the form.
    Lagrangians {
        file: String,
        #[arg(long)]
        form: String,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
        #[arg(long)]
        json: bool,
    },
    /// Connection and curvature of a transverse Lagrangian pair.
    Bilagrangian {
        file: String,
        #[arg(long)]
        form: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Primitivity verdicts for (g, ker ω) or (g, h).
    Primitivity {
        file: String,
        #[arg(long, conflicts_with = "isotropy", required_unless_present = "isotropy")]
        form: Option<String>,
        #[arg(long)]
        isotropy: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Run every invariant check on the document.
    Audit {
        file: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DotKind {
    Graph,
    Diagram,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Vergne,
    FlagAdapted,
    Both,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn invalid(m: impl ToString) -> Self {
        Failure { code: EXIT_INVALID, message: m.to_string() }
    }

    pub fn violation(m: impl ToString) -> Self {
        Failure { code: EXIT_VIOLATION, message: m.to_string() }
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    match commands::dispatch(&cli.command) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("{}\n", f.message) },
    }
}
