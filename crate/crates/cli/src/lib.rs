//! Command-line front end and file formats for `hass-core`.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a coalition is
//! not authorized, 2 on usage or input errors.

pub mod budget;
pub mod commands;
pub mod formats;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

pub use budget::Budgets;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Input(m) => write!(f, "{m}"),
        }
    }
}

impl From<hass_core::Error> for CliError {
    fn from(e: hass_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Result of a subcommand: whether its checks passed, and a summary object.
#[derive(Debug)]
pub struct Outcome {
    pub passed: bool,
    /// Printed verbatim before the summary, e.g. a table.
    pub body: Option<String>,
    pub summary: Value,
}

impl Outcome {
    pub fn ok(summary: Value) -> Self {
        Self::new(true, summary)
    }

    pub fn new(passed: bool, summary: Value) -> Self {
        Self {
            passed,
            body: None,
            summary,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hass", version, about = "Hidden access structure secret sharing toolkit")]
pub struct Cli {
    /// Print the summary as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate group parameters q = u * p_1 * ... * p_eta + 1.
    Setup(SetupArgs),
    /// Tabulate the set-system size counts.
    Count(CountArgs),
    /// Build, evaluate or verify the intersection polynomial.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Build and verify set-systems.
    #[command(subcommand)]
    Setsys(SetsysCommand),
    /// Encode a minimal set into tokens, or test a coalition.
    #[command(subcommand)]
    Ases(AsesCommand),
    /// Share and reconstruct secrets.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Run brute-force cross-checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Args)]
pub struct SetupArgs {
    #[arg(long)]
    pub parties: usize,
    #[arg(long, default_value_t = 16)]
    pub prime_bits: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(short, long, default_value = "params.json")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Largest n in the table.
    #[arg(long, default_value_t = 6)]
    pub n_max: u64,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Also report per-party share elements for this many parties.
    #[arg(long)]
    pub ell: Option<u64>,
    /// Write the table here instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum PolyCommand {
    Build {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
        #[arg(short, long, default_value = "poly.json")]
        out: PathBuf,
    },
    Eval {
        #[arg(long)]
        poly: PathBuf,
        /// Input bits, e.g. 10110.
        #[arg(long)]
        z: String,
    },
    Verify {
        #[arg(long)]
        poly: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum SetsysCommand {
    Build {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
        /// Run the condition checks.
        #[arg(long)]
        verify: bool,
        /// Collapse extensionally equal sets.
        #[arg(long)]
        dedupe: bool,
        /// Write the report here as well.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Export incidence vectors.
        #[arg(long)]
        vectors_out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AsesCommand {
    Encode {
        #[arg(long)]
        params: PathBuf,
        /// Minimal set, e.g. 1,2.
        #[arg(long, value_delimiter = ',')]
        omega: Vec<usize>,
        /// Party count (defaults to eta).
        #[arg(long)]
        parties: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        run_id: u32,
        #[arg(short, long, default_value = "tokens.json")]
        out: PathBuf,
        /// Also write dealer secrets (identifiers, certificate).
        #[arg(long, num_args = 0..=1, default_missing_value = "audit.json")]
        emit_secret_audit: Option<PathBuf>,
    },
    Hsver {
        #[arg(long)]
        tokens: PathBuf,
        #[arg(long, value_delimiter = ',')]
        coalition: Vec<usize>,
        /// Multiply all of the coalition's tokens instead of searching.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SchemeCommand {
    Share {
        #[arg(long)]
        access: PathBuf,
        /// Secret as hex.
        #[arg(long)]
        secret_hex: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Token group; generated from the seed when absent.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Share group; generated from the seed when absent.
        #[arg(long)]
        share_params: Option<PathBuf>,
        /// Base prime size for generated groups.
        #[arg(long, default_value_t = 16)]
        prime_bits: u32,
        #[arg(short, long, default_value = "bundle.json")]
        out: PathBuf,
        #[arg(long, num_args = 0..=1, default_missing_value = "audit.json")]
        emit_secret_audit: Option<PathBuf>,
    },
    Recon {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, value_delimiter = ',')]
        coalition: Vec<usize>,
        /// Multiply all of the coalition's shares instead of searching.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Default,
    Quick,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    All {
        #[arg(long, value_enum, default_value_t = Grid::Default)]
        grid: Grid,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Output goes to the given writers.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let budgets = match Budgets::from_env() {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    match commands::dispatch(&cli.command, &budgets) {
        Ok(outcome) => {
            if let Some(body) = &outcome.body {
                let _ = stdout.write_all(body.as_bytes());
            }
            let _ = print_summary(stdout, &outcome.summary, cli.json);
            if outcome.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn print_summary(out: &mut dyn Write, summary: &Value, json: bool) -> std::io::Result<()> {
    if summary.is_null() {
        return Ok(());
    }
    if json {
        return writeln!(out, "{}", serde_json::to_string(summary).expect("serializable"));
    }
    match summary {
        Value::Object(map) => print_object(out, map, ""),
        other => writeln!(out, "{other}"),
    }
}

fn print_object(out: &mut dyn Write, map: &Map<String, Value>, prefix: &str) -> std::io::Result<()> {
    for (k, v) in map {
        match v {
            Value::Object(inner) => print_object(out, inner, &format!("{prefix}{k}."))?,
            Value::String(s) => writeln!(out, "{prefix}{k}: {s}")?,
            other => writeln!(out, "{prefix}{k}: {other}")?,
        }
    }
    Ok(())
}

/// The given seed, or a fresh one; the flag records which.
pub fn resolve_seed(seed: Option<u64>) -> (u64, bool) {
    match seed {
        Some(s) => (s, false),
        None => (rand::random(), true),
    }
}

/// Coalition mask from 1-based party numbers given on the command line.
pub fn coalition_arg(parties: &[usize]) -> Result<u32, CliError> {
    if parties.is_empty() {
        return Err(CliError::usage("coalition must name at least one party"));
    }
    hass_core::access::coalition(parties).map_err(|e| CliError::usage(e.to_string()))
}
