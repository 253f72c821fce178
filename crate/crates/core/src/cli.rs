//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::basegen::{self, BaseError};
use crate::summation::{self, SumError};
use crate::verify::{run_verify, CheckResult, VerifyOptions};
use crate::{Quantity, Symmetry};

pub const CACHE_ENV: &str = "TRANSPORT_MOMENTS_CACHE";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SymArg {
    Unitary,
    Orthogonal,
}

impl From<SymArg> for Symmetry {
    fn from(s: SymArg) -> Self {
        match s {
            SymArg::Unitary => Symmetry::Unitary,
            SymArg::Orthogonal => Symmetry::Orthogonal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuantityArg {
    Transmission,
    Reflection,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::Transmission => Quantity::Transmission,
            QuantityArg::Reflection => Quantity::Reflection,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "transport-moments", version, about = "Base structures and exact transport moment generating functions")]
struct Cli {
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Structure cache directory.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Output format: text (bases, verify), json, or csv (moments only).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count or list base structures.
    Bases(BasesArgs),
    /// Generating-function coefficient of one order.
    Moments(MomentsArgs),
    /// Run the verification catalogue.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["count", "list"]))]
struct BasesArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    genus2: u32,
    #[arg(long, value_enum)]
    symmetry: SymArg,
    #[arg(long)]
    count: bool,
    #[arg(long)]
    list: bool,
}

#[derive(Debug, Args)]
struct MomentsArgs {
    #[arg(long, value_enum)]
    quantity: QuantityArg,
    #[arg(long, value_enum)]
    symmetry: SymArg,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
    genus2: u32,
    #[arg(short = 'K', long = "truncation", default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..))]
    truncation: u32,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Highest order to compute.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=4))]
    genus2: u32,
    #[arg(short = 'K', long = "truncation", default_value_t = 10, value_parser = clap::value_parser!(u32).range(2..))]
    truncation: u32,
}

fn exit_for_sum(e: &SumError) -> i32 {
    match e {
        SumError::Base(b) => exit_for_base(b),
        SumError::Unsupported(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

fn exit_for_base(e: &BaseError) -> i32 {
    match e {
        BaseError::Io(_) => EXIT_USAGE,
        _ => EXIT_INTERNAL,
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    if cli.threads > 0 {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let res = match &cli.command {
        Command::Bases(a) => cmd_bases(&cli, a, out),
        Command::Moments(a) => cmd_moments(&cli, a, out),
        Command::Verify(a) => cmd_verify(&cli, a, out),
    };
    match res {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

type CmdResult = Result<i32, (i32, String)>;

fn io_err(e: std::io::Error) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn cmd_bases(cli: &Cli, a: &BasesArgs, out: &mut dyn Write) -> CmdResult {
    let format = cli.format.unwrap_or(Format::Text);
    if format == Format::Csv {
        return Err((EXIT_USAGE, "csv output is only available for moments".into()));
    }
    let sym: Symmetry = a.symmetry.into();
    let cat = basegen::catalogue(a.genus2, sym, cli.cache_dir.as_deref()).map_err(|e| (exit_for_base(&e), e.to_string()))?;
    let text = if a.count {
        match format {
            Format::Text => {
                let parts: Vec<String> = cat.iter().map(|(m, l)| format!("m={m}: {}", l.len())).collect();
                format!("{}\n", parts.join(", "))
            }
            _ => {
                let counts: serde_json::Map<String, serde_json::Value> = cat.iter().map(|(m, l)| (m.to_string(), json!(l.len()))).collect();
                format!("{}\n", json!({"genus2": a.genus2, "symmetry": sym, "counts": counts}))
            }
        }
    } else {
        match format {
            Format::Text => cat.values().flatten().map(|b| format!("{}\n", b.to_line())).collect(),
            _ => {
                let list: Vec<_> = cat.iter().flat_map(|(m, l)| l.iter().map(move |b| json!({"m": m, "epsilon": b.to_line()}))).collect();
                format!("{}\n", json!({"genus2": a.genus2, "symmetry": sym, "structures": list}))
            }
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_moments(cli: &Cli, a: &MomentsArgs, out: &mut dyn Write) -> CmdResult {
    let format = cli.format.unwrap_or(Format::Json);
    if format == Format::Text {
        return Err((EXIT_USAGE, "moments supports --format json or csv".into()));
    }
    let res = summation::assemble(a.genus2, a.symmetry.into(), a.quantity.into(), a.truncation as usize, cli.cache_dir.as_deref())
        .map_err(|e| (exit_for_sum(&e), e.to_string()))?;
    let text = match format {
        Format::Csv => res.to_csv(),
        _ => format!("{}\n", serde_json::to_string_pretty(&res.to_json()).expect("json")),
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    if let Some(summation::ConjectureStatus::Violation(msg)) = res.conjecture.as_ref().map(|c| &c.status) {
        return Err((EXIT_INTERNAL, format!("conjecture check failed: {msg}")));
    }
    Ok(EXIT_OK)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let format = cli.format.unwrap_or(Format::Text);
    let opts = VerifyOptions { max_genus2: a.genus2, truncation: a.truncation as usize, cache: cli.cache_dir.clone() };
    if format == Format::Csv {
        return Err((EXIT_USAGE, "csv output is only available for moments".into()));
    }
    let mut write_err = None;
    let report = run_verify(&opts, &mut |c: &CheckResult| {
        let line = match format {
            Format::Text => Some(format!("{} [{}] {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.criterion, c.name, c.detail)),
            _ => None,
        };
        if let Some(l) = line {
            if let Err(e) = out.write_all(l.as_bytes()).and_then(|_| out.flush()) {
                write_err.get_or_insert(e);
            }
        }
    });
    if let Some(e) = write_err {
        return Err(io_err(e));
    }
    if format == Format::Json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report.to_json()).expect("json")).map_err(io_err)?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY })
}
