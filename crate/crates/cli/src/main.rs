//! `billiards`: command-line front end. Every invocation prints exactly one
//! JSON document on standard output.

mod commands;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use commands::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "billiards",
    version,
    about = "Light rays bouncing in integer grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count closed and open paths, by formula and by enumeration.
    Count {
        #[command(flatten)]
        grid: GridArg,
        /// Skip enumeration above this many phase states.
        #[arg(long, default_value_t = arith_billiards::DEFAULT_STATE_CAP)]
        cap: u64,
    },
    /// Follow a ray for a number of steps.
    Simulate {
        #[command(flatten)]
        grid: GridArg,
        /// Start point, e.g. `0,3`.
        #[arg(long)]
        start: String,
        /// Direction per axis as `+`/`-` characters; all `+` by default.
        #[arg(long, allow_hyphen_values = true)]
        mask: Option<String>,
        #[arg(long)]
        steps: u64,
    },
    /// Decide whether the ray leaving one point passes through another.
    Reach {
        #[command(flatten)]
        grid: GridArg,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "any_direction")]
        mask: Option<String>,
        /// Try every starting direction.
        #[arg(long)]
        any_direction: bool,
        /// Cross-check against step-by-step iteration over a full period.
        #[arg(long)]
        verify: bool,
    },
    /// List the diagonal-walk orbits with their sizes.
    Orbits {
        #[command(flatten)]
        grid: GridArg,
        /// Skip point-by-point counting above this many lattice points.
        #[arg(long, default_value_t = arith_billiards::DEFAULT_STATE_CAP)]
        cap: u64,
    },
    /// Generating function of a circular sequence.
    Genfunc {
        /// `+`/`pos` or `-`/`neg`.
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        m: u64,
        /// Also expand the series through the x^N term.
        #[arg(long)]
        expand: Option<usize>,
    },
    /// Draw a planar grid and its paths as SVG.
    Render {
        #[command(flatten)]
        grid: GridArg,
        #[arg(long)]
        out: std::path::PathBuf,
        #[arg(long, value_enum, default_value_t = PathFilter::All)]
        paths: PathFilter,
        #[arg(long)]
        cell_size: Option<u32>,
        #[arg(long)]
        margin: Option<u32>,
        /// Comma-separated stroke colours, cycled per path.
        #[arg(long)]
        palette: Option<String>,
    },
}

#[derive(Debug, Args)]
struct GridArg {
    /// Grid dimensions, e.g. `6,4`.
    #[arg(long)]
    dims: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathFilter {
    All,
    Open,
    Closed,
}

#[derive(Serialize)]
struct CommandResult<'a> {
    schema_version: &'static str,
    command: &'a str,
    grid: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    payload: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<Value>,
    elapsed_ms: u128,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count { .. } => "count",
            Command::Simulate { .. } => "simulate",
            Command::Reach { .. } => "reach",
            Command::Orbits { .. } => "orbits",
            Command::Genfunc { .. } => "genfunc",
            Command::Render { .. } => "render",
        }
    }

    fn dims(&self) -> Option<&str> {
        match self {
            Command::Count { grid, .. }
            | Command::Simulate { grid, .. }
            | Command::Reach { grid, .. }
            | Command::Orbits { grid, .. }
            | Command::Render { grid, .. } => Some(&grid.dims),
            Command::Genfunc { .. } => None,
        }
    }
}

fn emit(doc: &CommandResult<'_>) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("JSON values serialize")
    );
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            emit(&CommandResult {
                schema_version: commands::SCHEMA_VERSION,
                command: "",
                grid: None,
                payload: None,
                error: Some(serde_json::json!({ "code": 2, "message": e.to_string().trim_end() })),
                elapsed_ms: started.elapsed().as_millis(),
            });
            return ExitCode::from(2);
        }
    };

    let grid = cli
        .command
        .dims()
        .and_then(|d| arith_billiards::GridSpec::parse(d).ok())
        .map(|g| g.dims().to_vec());
    let outcome = commands::run(&cli.command);
    let (payload, error, code) = match outcome {
        Ok(done) => (
            Some(done.payload),
            None,
            if done.consistent { 0 } else { 1 },
        ),
        Err(Failure {
            code,
            message,
            payload,
        }) => (
            payload,
            Some(serde_json::json!({ "code": code, "message": message })),
            code,
        ),
    };
    emit(&CommandResult {
        schema_version: commands::SCHEMA_VERSION,
        command: cli.command.name(),
        grid,
        payload,
        error,
        elapsed_ms: started.elapsed().as_millis(),
    });
    ExitCode::from(code)
}
