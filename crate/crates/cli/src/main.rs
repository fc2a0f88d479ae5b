//! `bracket`: build, evaluate and analyse bracket words from the command line.

mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bracketwords::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bracket", version, about = "Exact construction and analysis of bracket words")]
pub struct Cli {
    /// Definition file with `field`, `const` and `word` lines (repeatable).
    #[arg(long, global = true, value_name = "PATH")]
    pub defs: Vec<PathBuf>,

    /// Seed for randomized sampling in verification modes.
    #[arg(long, global = true, default_value_t = bracketwords::verify::DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse an expression and report its structure.
    Parse {
        #[arg(long)]
        expr: String,
        /// Also report the sum normal form.
        #[arg(long)]
        normal: bool,
    },
    /// Evaluate an expression exactly at `n` (or at every `n` in `[n, to]`).
    Eval {
        #[arg(long)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<i64>,
    },
    /// Print a prefix (or slice) of a word.
    Gen {
        /// Catalog name or constructor pipeline.
        #[arg(long)]
        word: String,
        /// Number of symbols.
        #[arg(long)]
        range: usize,
        #[arg(long, default_value_t = 0)]
        start: u64,
        /// Symbol indices as raw bytes.
        #[arg(long, conflicts_with = "lines")]
        raw: bool,
        /// One symbol label per line.
        #[arg(long)]
        lines: bool,
    },
    /// Measure a word over a finite horizon.
    Analyze(AnalyzeArgs),
    /// Cubic Pisot unit recognizer for `x³ − ax² − bx − 1`.
    Pisot(PisotArgs),
    /// Integer relations, half-space cuts and prefix counts.
    Lattice {
        #[command(subcommand)]
        command: LatticeCommand,
    },
    /// Run acceptance checks and print one line per check.
    Verify {
        /// Suite name, check name or check number; all checks when omitted.
        #[arg(long)]
        suite: Option<String>,
        /// JSON records instead of text lines.
        #[arg(long)]
        json: bool,
        /// Include wall-clock times (makes output run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// List catalog words with their definitions.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Complexity,
    Freq,
    Rec,
    Count,
    Discrepancy,
    Balance,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub word: String,
    #[arg(long, value_enum)]
    pub measure: Measure,
    /// Lengths `N` as a list `1,2,5` or range `1..=50` (default `1..=20`).
    #[arg(long)]
    pub n: Option<String>,
    /// Prefix length examined.
    #[arg(long, default_value_t = 100_000)]
    pub horizon: usize,
    /// Symbol label for `count`, `discrepancy` and `balance` (default `1`, else the first symbol).
    #[arg(long)]
    pub symbol: Option<String>,
    /// Factor for `freq` and `rec`: symbol labels separated by commas, or a string of one-character labels.
    #[arg(long)]
    pub factor: Option<String>,
    /// Window starts for `freq` (same syntax as `--n`, default `0`).
    #[arg(long)]
    pub starts: Option<String>,
    /// `N,value` table instead of JSON lines.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug)]
pub struct PisotArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub b: i64,
    /// Membership of `n`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "word")]
    pub test: Option<String>,
    /// Indicator prefix of length `N`.
    #[arg(long)]
    pub word: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum LatticeCommand {
    /// `Λ = span R_N(α, ε)` with its sandwich certificate.
    Approx {
        /// Comma-separated constants, e.g. `1,sqrt(2),sqrt(3)`.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        eps: String,
        #[arg(long = "N", visible_alias = "n")]
        n: i64,
    },
    /// Distinct sets `S ∩ H` for the points in a file (one point per line).
    Cuts {
        #[arg(long)]
        points: PathBuf,
        /// List every cut as point indices.
        #[arg(long)]
        list: bool,
    },
    /// Distinct prefixes of `⌊Σ αᵢhᵢ(n)⌋` over a rational parameter grid.
    Prefix {
        /// Integer-valued expression in `n` (repeat for each coordinate).
        #[arg(long = "h", required = true)]
        h: Vec<String>,
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[arg(long = "R", visible_alias = "r", default_value_t = 1)]
        r: u32,
        #[arg(long)]
        step: String,
        /// Also rebuild this many sampled prefixes from lattice data.
        #[arg(long)]
        verify: Option<usize>,
    },
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage => 2,
        ErrorKind::Precision => 3,
        ErrorKind::Domain => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let result = run::dispatch(&cli, &mut out);
    let flushed = out.flush();
    match result {
        Ok(code) => {
            if let Err(e) = flushed {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("{}", serde_json::json!({ "error": "Io", "kind": "io", "message": e.to_string() }));
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(code)
        }
        Err(run::Failure::Lib(e)) => {
            let kind = e.kind();
            let record = serde_json::json!({
                "error": e.code(),
                "kind": format!("{kind:?}").to_lowercase(),
                "message": e.to_string(),
            });
            eprintln!("{record}");
            ExitCode::from(exit_code(kind))
        }
        Err(run::Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(run::Failure::Io(e)) => {
            eprintln!("{}", serde_json::json!({ "error": "Io", "kind": "usage", "message": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
