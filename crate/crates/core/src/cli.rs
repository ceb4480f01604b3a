//! Command-line front end.
//!
//! Exit codes: 0 verified or converted, 1 proof not verified, 2 usage, parse or I/O error.
//! Every diagnostic line starts with `c `; the verdict line starts with `s `.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checker::{check_proof_with, CheckOptions};
use crate::dimacs::parse_dimacs;
use crate::model::{Formula, Proof, TraceEvent, Verdict};
use crate::proof_io::{detect_encoding, parse_proof, serialize_proof, ProofEncoding};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_VERIFIED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "drat",
    version,
    about = "Check and convert DRAT unsatisfiability proofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a DRAT proof against a DIMACS CNF formula.
    Check {
        formula: PathBuf,
        proof: PathBuf,
        #[command(flatten)]
        encoding: EncodingFlags,
        /// Only print the verdict line (and the rejection reason).
        #[arg(short, long, conflicts_with = "verbose")]
        quiet: bool,
        /// Print a line for every checked step.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Re-encode a DRAT proof as plain text or binary.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        encoding: EncodingFlags,
    },
}

#[derive(Args, Debug)]
struct EncodingFlags {
    /// Parse the proof as plain text, skipping detection.
    #[arg(long, conflicts_with = "binary")]
    plain: bool,
    /// Parse the proof as binary DRAT, skipping detection.
    #[arg(long)]
    binary: bool,
}

impl EncodingFlags {
    fn choice(&self) -> EncodingChoice {
        match (self.plain, self.binary) {
            (true, _) => EncodingChoice::Plain,
            (_, true) => EncodingChoice::Binary,
            _ => EncodingChoice::Auto,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    Plain,
    Binary,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EncodingChoice {
    Auto,
    Plain,
    Binary,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Verbosity {
    Quiet,
    Normal,
    Verbose,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Check {
        formula: PathBuf,
    },
    Convert {
        target: ProofEncoding,
        output: PathBuf,
    },
}

/// One invocation: either a check or a conversion of `proof`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub mode: Mode,
    pub proof: PathBuf,
    pub encoding: EncodingChoice,
    pub verbosity: Verbosity,
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> RunConfig {
        match cli.command {
            Command::Check {
                formula,
                proof,
                encoding,
                quiet,
                verbose,
            } => RunConfig {
                mode: Mode::Check { formula },
                proof,
                encoding: encoding.choice(),
                verbosity: if quiet {
                    Verbosity::Quiet
                } else if verbose {
                    Verbosity::Verbose
                } else {
                    Verbosity::Normal
                },
            },
            Command::Convert {
                input,
                to,
                output,
                encoding,
            } => RunConfig {
                mode: Mode::Convert {
                    target: match to {
                        Target::Plain => ProofEncoding::Plain,
                        Target::Binary => ProofEncoding::Binary,
                    },
                    output,
                },
                proof: input,
                encoding: encoding.choice(),
                verbosity: Verbosity::Normal,
            },
        }
    }
}

/// Parses `args` (including the program name) and runs the selected command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_config(&RunConfig::from(cli), out, err),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INPUT_ERROR
            } else {
                EXIT_OK
            };
            if e.use_stderr() {
                for line in e.render().to_string().lines() {
                    let _ = writeln!(err, "c {line}");
                }
            } else {
                let _ = write!(out, "{}", e.render());
            }
            code
        }
    }
}

pub fn run_config(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &config.mode {
        Mode::Check { formula } => run_check(formula, config, out),
        Mode::Convert { target, output } => run_convert(*target, output, config, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(err, "c error: {message}");
            EXIT_INPUT_ERROR
        }
    }
}

struct Failure(String);

fn fail(path: &Path, e: impl Display) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| fail(path, e))
}

fn load_proof(
    path: &Path,
    choice: EncodingChoice,
) -> Result<(Proof, ProofEncoding, usize), Failure> {
    let bytes = read(path)?;
    let encoding = match choice {
        EncodingChoice::Auto => detect_encoding(&bytes),
        EncodingChoice::Plain => ProofEncoding::Plain,
        EncodingChoice::Binary => ProofEncoding::Binary,
    };
    let proof =
        parse_proof(&bytes, encoding).map_err(|e| fail(path, format!("{encoding} proof: {e}")))?;
    Ok((proof, encoding, bytes.len()))
}

fn load_formula(path: &Path) -> Result<Formula, Failure> {
    let bytes = read(path)?;
    parse_dimacs(&bytes).map_err(|e| fail(path, e))
}

// Write errors on the report stream are not actionable and do not change the verdict.
macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        let _ = writeln!($out, $($arg)*);
    };
}

fn run_check(formula_path: &Path, config: &RunConfig, out: &mut dyn Write) -> Result<i32, Failure> {
    let formula = load_formula(formula_path)?;
    let (proof, encoding, _) = load_proof(&config.proof, config.encoding)?;
    let normal = config.verbosity >= Verbosity::Normal;
    let verbose = config.verbosity >= Verbosity::Verbose;
    if normal {
        say!(
            out,
            "c formula: {} clauses, {} variables",
            formula.len(),
            formula.declared_vars
        );
        say!(out, "c proof: {} steps ({encoding})", proof.len());
    }

    let report = check_proof_with(formula, &proof, CheckOptions { trace: verbose });

    if verbose {
        for event in &report.trace {
            print_event(out, event);
        }
    }
    if normal {
        for warning in &report.warnings {
            say!(out, "c warning: {warning}");
        }
    }
    let stats = &report.stats;
    match &report.verdict {
        Verdict::Verified { step } => {
            if normal {
                say!(
                    out,
                    "c empty clause accepted at step {step}: {} AT and {} RAT additions, \
                     {} deletions, {} deletions ignored",
                    stats.at_additions,
                    stats.rat_additions,
                    stats.deletions,
                    stats.ignored_deletions
                );
            }
            say!(out, "s VERIFIED");
            Ok(EXIT_OK)
        }
        Verdict::Rejected(rejection) => {
            say!(out, "c rejected at {rejection}");
            say!(out, "s NOT VERIFIED");
            Ok(EXIT_NOT_VERIFIED)
        }
        Verdict::NoEmptyClause => {
            say!(out, "c proof ended without adding the empty clause");
            say!(out, "s NOT VERIFIED");
            Ok(EXIT_NOT_VERIFIED)
        }
    }
}

fn print_event(out: &mut dyn Write, event: &TraceEvent) {
    match event {
        TraceEvent::AddAt { step, clause } => {
            say!(out, "c step {step}: add {clause} (AT)");
        }
        TraceEvent::AddRat {
            step,
            clause,
            pivot,
            resolvents,
        } => {
            say!(
                out,
                "c step {step}: add {clause} (RAT on pivot {pivot}, {} resolvents)",
                resolvents.len()
            );
            for r in resolvents {
                let status = if r.is_at { "AT" } else { "not AT" };
                match &r.resolvent {
                    Some(res) => {
                        say!(out, "c   resolvent {res} with {}: {status}", r.against);
                    }
                    None => {
                        say!(out, "c   resolvent with {}: tautology", r.against);
                    }
                }
            }
        }
        TraceEvent::Delete {
            step,
            clause,
            order_mismatch,
        } => {
            if *order_mismatch {
                say!(
                    out,
                    "c step {step}: delete {clause} (stored copy has a different literal order)"
                );
            } else {
                say!(out, "c step {step}: delete {clause}");
            }
        }
    }
}

fn run_convert(
    target: ProofEncoding,
    output: &Path,
    config: &RunConfig,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (proof, encoding, read_len) = load_proof(&config.proof, config.encoding)?;
    let bytes = serialize_proof(&proof, target);
    fs::write(output, &bytes).map_err(|e| fail(output, e))?;
    say!(
        out,
        "c read {read_len} bytes ({encoding}), wrote {} bytes ({target})",
        bytes.len()
    );
    Ok(EXIT_OK)
}
