//! `ddmr`: compute, query, validate and compare extensions of defeasible
//! deontic theories, and benchmark the engine.
//!
//! Exit codes: 0 success (or Proved), 1 validation errors, 2 parse errors or
//! unreadable input, 3 Refuted, 4 Undetermined, 5 engine/oracle mismatch,
//! 6 query subject outside the theory, 7 oracle could not run.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ddmr::bench::{run_bench, to_csv};
use ddmr::engine::{compute_extension, diff_variants, query, EngineError};
use ddmr::generate::Family;
use ddmr::oracle::{compare, oracle_extension};
use ddmr::text::{parse_tagged_formula, parse_theory_bytes, render_extension, Format};
use ddmr::validate::validate;
use ddmr::{Extension, Outcome, Subject, Theory, Variant};

#[derive(Parser)]
#[command(name = "ddmr", version, about = "Defeasible deontic logic with meta-rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the extension of a theory.
    Extension {
        path: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Ask whether a tagged formula such as `+dO a` or `-dmC ~beta` holds.
    Query {
        path: PathBuf,
        formula: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Report validation errors and warnings.
    Validate { path: PathBuf },
    /// List pairs decided differently by the simple and cautious variants.
    Diff {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Time the engine on generated theories and write CSV.
    Bench {
        /// Families to run; repeat the flag or separate with commas.
        #[arg(long = "family", value_delimiter = ',', default_values_t = vec!["chain".to_string(), "team".to_string(), "meta-chain".to_string()])]
        families: Vec<String>,
        /// Target sizes; an empty value gives a header-only CSV.
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        sizes: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one variant; both run by default.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunOpts {
    #[arg(long, value_enum, default_value_t = VariantArg::Cautious)]
    variant: VariantArg,
    /// Cross-check against the proof-condition oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Simple,
    Cautious,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Simple => Variant::Simple,
            VariantArg::Cautious => Variant::Cautious,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
        }
    }
}

const VALIDATION: u8 = 1;
const INPUT: u8 = 2;
const REFUTED: u8 = 3;
const UNDETERMINED: u8 = 4;
const MISMATCH: u8 = 5;
const UNKNOWN_SUBJECT: u8 = 6;
const ORACLE_FAILED: u8 = 7;

/// Reads, parses and validates; on failure returns the exit code after
/// reporting on stderr.
fn load(path: &Path) -> Result<Theory, u8> {
    let bytes = fs::read(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        INPUT
    })?;
    let t = parse_theory_bytes(&bytes).map_err(|errs| {
        for e in errs {
            eprintln!("{}:{e}", path.display());
        }
        INPUT
    })?;
    let report = validate(&t);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if !report.is_ok() {
        for e in &report.errors {
            eprintln!("error: {e}");
        }
        return Err(VALIDATION);
    }
    Ok(t)
}

fn engine_failed(e: EngineError) -> u8 {
    eprintln!("error: {e}");
    match e {
        EngineError::Invalid(_) => VALIDATION,
        EngineError::UnknownSubject(_) => UNKNOWN_SUBJECT,
    }
}

/// Compares with the oracle; `Err` carries the exit code.
fn cross_check(t: &Theory, v: Variant, engine: &Extension) -> Result<(), u8> {
    let oracle = oracle_extension(t, v).map_err(|e| {
        eprintln!("error: oracle: {e}");
        ORACLE_FAILED
    })?;
    let diff = compare(engine, &oracle);
    if diff.is_empty() {
        eprintln!("oracle: agrees");
        return Ok(());
    }
    for m in &diff {
        eprintln!("oracle mismatch: {m}");
    }
    Err(MISMATCH)
}

fn run(cli: Cli) -> Result<u8, u8> {
    match cli.command {
        Command::Extension { path, opts, format } => {
            let t = load(&path)?;
            let v = opts.variant.into();
            let e = compute_extension(&t, v).map_err(engine_failed)?;
            print!("{}", render_extension(&e, format.into()));
            if opts.oracle {
                cross_check(&t, v, &e)?;
            }
            Ok(0)
        }
        Command::Query { path, formula, opts } => {
            let t = load(&path)?;
            let f = parse_tagged_formula(&formula).map_err(|e| {
                eprintln!("error: {e}");
                INPUT
            })?;
            let v = opts.variant.into();
            let outcome = query(&t, v, &f).map_err(engine_failed)?;
            if opts.oracle {
                let e = compute_extension(&t, v).map_err(engine_failed)?;
                cross_check(&t, v, &e)?;
            }
            println!("{outcome:?}");
            Ok(match outcome {
                Outcome::Proved => 0,
                Outcome::Refuted => REFUTED,
                Outcome::Undetermined => UNDETERMINED,
            })
        }
        Command::Validate { path } => {
            let bytes = fs::read(&path).map_err(|e| {
                eprintln!("error: cannot read {}: {e}", path.display());
                INPUT
            })?;
            let t = parse_theory_bytes(&bytes).map_err(|errs| {
                for e in errs {
                    eprintln!("{}:{e}", path.display());
                }
                INPUT
            })?;
            let report = validate(&t);
            for e in &report.errors {
                println!("error: {e}");
            }
            for w in &report.warnings {
                println!("warning: {w}");
            }
            if report.is_ok() {
                if report.warnings.is_empty() {
                    println!("ok");
                }
                Ok(0)
            } else {
                Ok(VALIDATION)
            }
        }
        Command::Diff { path, format } => {
            let t = load(&path)?;
            let rows = diff_variants(&t).map_err(engine_failed)?;
            let mode = |m: ddmr::Mode, s: &Subject| match s {
                Subject::Literal(_) => m.to_string(),
                Subject::Rule(_) => format!("m{m}"),
            };
            match format {
                FormatArg::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|d| {
                            json!({
                                "mode": mode(d.mode, &d.subject),
                                "subject": d.subject.to_string(),
                                "simple": format!("{:?}", d.simple),
                                "cautious": format!("{:?}", d.cautious),
                            })
                        })
                        .collect();
                    let s = serde_json::to_string_pretty(&rows).expect("plain values serialize");
                    println!("{s}");
                }
                FormatArg::Text => {
                    if !rows.is_empty() {
                        println!("{:<4} {:<12} {:<13} cautious", "mode", "subject", "simple");
                    }
                    for d in &rows {
                        println!(
                            "{:<4} {:<12} {:<13} {:?}",
                            mode(d.mode, &d.subject),
                            d.subject.to_string(),
                            format!("{:?}", d.simple),
                            d.cautious
                        );
                    }
                }
            }
            Ok(0)
        }
        Command::Bench { families, sizes, seed, variant, out } => {
            let families: Vec<Family> = families
                .iter()
                .filter(|s| !s.is_empty())
                .map(|s| s.parse())
                .collect::<Result<_, _>>()
                .map_err(|e| {
                    eprintln!("error: {e}");
                    INPUT
                })?;
            let sizes: Vec<usize> = sizes
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|e| {
                    eprintln!("error: bad size: {e}");
                    INPUT
                })?;
            let variants: Vec<Variant> = match variant {
                Some(v) => vec![v.into()],
                None => vec![Variant::Simple, Variant::Cautious],
            };
            let records = run_bench(&families, &sizes, seed, &variants).map_err(engine_failed)?;
            let csv = to_csv(&records);
            match out {
                Some(p) => fs::write(&p, csv).map_err(|e| {
                    eprintln!("error: cannot write {}: {e}", p.display());
                    INPUT
                })?,
                None => print!("{csv}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(c) | Err(c) => c,
    };
    ExitCode::from(code)
}
