//! The `hof` command line.
//!
//! Exit codes: 0 success, 1 parse, type or evaluation error, 2 I/O error,
//! 3 fuel exhausted.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::circuit::{self, CircuitError};
use crate::gen::{GenConfig, Generator};
use crate::lang::{parse, parse_program, typecheck, ParseError, Term, TypeError};
use crate::netlist::{emit_dot, emit_netlist};
use crate::symbolic::{self, EvalError};
use crate::types::Ty;
use crate::DEFAULT_FUEL;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_FUEL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Symbolic,
    Circuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "hof", version, about = "Higher-order combinators as terms and as circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the type of `main`.
    Check { file: PathBuf },
    /// Evaluate `main` to a numeral.
    Eval {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "symbolic")]
        engine: Engine,
        #[arg(long, default_value_t = DEFAULT_FUEL, value_parser = positive)]
        fuel: usize,
        /// Write the rewrite trace or the circuit event log here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Elaborate `main` and write its netlist.
    Netlist {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate with both engines and compare.
    Diff {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FUEL, value_parser = positive)]
        fuel: usize,
    },
    /// Compare both engines on random programs.
    Fuzz {
        #[arg(long, value_parser = positive)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_depth: usize,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        max_count: u64,
    },
}

/// Settings shared by the evaluating commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub engine: Engine,
    pub fuel: usize,
    pub trace_path: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { engine: Engine::Symbolic, fuel: DEFAULT_FUEL, trace_path: None, seed: None }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("main has type {0}, expected N")]
    NotNat(Ty),
    #[error("{}: {0}", eval_error_name(.0))]
    Eval(#[from] EvalError),
    #[error("{}: {0}", circuit_error_name(.0))]
    Circuit(#[from] CircuitError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Eval(EvalError::FuelExhausted { .. }) | CliError::Circuit(CircuitError::FuelExhausted(_)) => {
                EXIT_FUEL
            }
            _ => EXIT_ERROR,
        }
    }
}

pub fn eval_error_name(e: &EvalError) -> &'static str {
    match e {
        EvalError::FuelExhausted { .. } => "FuelExhausted",
        EvalError::StuckTerm(_) => "StuckTerm",
        EvalError::Overflow(_) => "Overflow",
    }
}

pub fn circuit_error_name(e: &CircuitError) -> &'static str {
    match e {
        CircuitError::LinkTypeMismatch { .. } => "LinkTypeMismatch",
        CircuitError::SocketOccupied(_) => "SocketOccupied",
        CircuitError::FuelExhausted(_) => "FuelExhausted",
        CircuitError::UnresolvedCount(_) => "UnresolvedCount",
        CircuitError::DanglingSocket(_) => "DanglingSocket",
        CircuitError::CycleDetected(_) => "CycleDetected",
        CircuitError::NotFirstOrder { .. } => "NotFirstOrder",
        CircuitError::RootNotNat(_) => "RootNotNat",
        CircuitError::Overflow(_) => "Overflow",
        CircuitError::Type(_) => "TypeError",
        CircuitError::Internal(_) => "Internal",
    }
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Reads, parses and typechecks a program file.
pub fn load(path: &Path) -> Result<(Arc<Term>, Ty), CliError> {
    let src = fs::read_to_string(path).map_err(io_error(path))?;
    let t = parse(&src)?;
    // a program's definitions carry type annotations of their own
    let ty = match parse_program(&src) {
        Ok(program) => program.check()?.1,
        Err(_) => typecheck(&t)?,
    };
    Ok((t, ty))
}

fn load_nat(path: &Path) -> Result<Arc<Term>, CliError> {
    let (t, ty) = load(path)?;
    if !ty.is_nat() {
        return Err(CliError::NotNat(ty));
    }
    Ok(t)
}

/// Elaborates and runs a program on the circuit machine.
pub type CircuitEngine = fn(&Arc<Term>, usize) -> Result<u64, CircuitError>;

pub fn circuit_eval(t: &Arc<Term>, fuel: usize) -> Result<u64, CircuitError> {
    let c = circuit::elaborate(circuit::instantiate(t)?, fuel)?;
    circuit::run(&c)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(io_error(path))
}

pub fn cmd_check(file: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let (_, ty) = load(file)?;
    writeln!(out, "{ty}").map_err(io_error(Path::new("<stdout>")))
}

pub fn cmd_eval(file: &Path, cfg: &RunConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let t = load_nat(file)?;
    let value = match cfg.engine {
        Engine::Symbolic => match &cfg.trace_path {
            Some(path) => {
                let trace = symbolic::normalize(&t, cfg.fuel)?;
                write_file(path, &trace.render())?;
                let normal = trace.final_term().clone();
                match &*normal {
                    Term::Lit(n) => *n,
                    _ => return Err(EvalError::StuckTerm(normal).into()),
                }
            }
            None => symbolic::evaluate_nat(&t, cfg.fuel)?,
        },
        Engine::Circuit => {
            let c = circuit::elaborate(circuit::instantiate(&t)?, cfg.fuel)?;
            if let Some(path) = &cfg.trace_path {
                write_file(path, &c.render_event_log())?;
            }
            circuit::run(&c)?
        }
    };
    writeln!(out, "{value}").map_err(io_error(Path::new("<stdout>")))
}

pub fn cmd_netlist(file: &Path, output: &Path, format: Format) -> Result<(), CliError> {
    let (t, _) = load(file)?;
    let c = circuit::elaborate(circuit::instantiate(&t)?, DEFAULT_FUEL)?;
    let text = match format {
        Format::Text => emit_netlist(&c)?,
        Format::Dot => emit_dot(&c),
    };
    write_file(output, &text)
}

/// Runs both engines; `Ok(true)` iff they agree.
pub fn cmd_diff(file: &Path, cfg: &RunConfig, out: &mut dyn Write) -> Result<bool, CliError> {
    let t = load_nat(file)?;
    let s = symbolic::evaluate_nat(&t, cfg.fuel)?;
    let c = circuit_eval(&t, cfg.fuel)?;
    writeln!(out, "symbolic={s} circuit={c}").map_err(io_error(Path::new("<stdout>")))?;
    Ok(s == c)
}

fn describe<E: std::fmt::Display>(r: &Result<u64, E>, name: impl Fn(&E) -> &'static str) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("{}({e})", name(e)),
    }
}

/// Compares the symbolic engine with `engine` on `count` generated programs.
/// Returns the number of disagreements; each is printed in canonical syntax.
pub fn cmd_fuzz(count: usize, seed: u64, cfg: GenConfig, engine: CircuitEngine, out: &mut dyn Write) -> io::Result<usize> {
    let mut generator = Generator::new(seed, cfg);
    let mut failures = 0;
    for i in 0..count {
        let t = generator.program();
        let s = symbolic::evaluate_nat(&t, DEFAULT_FUEL);
        let c = engine(&t, DEFAULT_FUEL);
        let agree = matches!((&s, &c), (Ok(a), Ok(b)) if a == b);
        if !agree {
            failures += 1;
            writeln!(out, "counterexample {i}: {t}")?;
            writeln!(
                out,
                "  symbolic={} circuit={}",
                describe(&s, eval_error_name),
                describe(&c, circuit_error_name)
            )?;
        }
    }
    writeln!(out, "fuzz: {count} programs, {failures} disagreements")?;
    Ok(failures)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, engine: CircuitEngine, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Check { file } => cmd_check(&file, out).map(|_| EXIT_OK),
        Command::Eval { file, engine, fuel, trace } => {
            let cfg = RunConfig { engine, fuel, trace_path: trace, seed: None };
            cmd_eval(&file, &cfg, out).map(|_| EXIT_OK)
        }
        Command::Netlist { file, output, format } => cmd_netlist(&file, &output, format).map(|_| EXIT_OK),
        Command::Diff { file, fuel } => {
            let cfg = RunConfig { fuel, ..RunConfig::default() };
            match cmd_diff(&file, &cfg, out) {
                Ok(true) => Ok(EXIT_OK),
                Ok(false) => Ok(EXIT_ERROR),
                // any engine error counts as a disagreement here
                Err(e @ (CliError::Eval(_) | CliError::Circuit(_))) => {
                    let _ = writeln!(err, "error: {e}");
                    Ok(EXIT_ERROR)
                }
                Err(e) => Err(e),
            }
        }
        Command::Fuzz { count, seed, max_depth, max_count } => {
            let cfg = GenConfig { max_depth, max_count };
            match cmd_fuzz(count, seed, cfg, engine, out) {
                Ok(0) => Ok(EXIT_OK),
                Ok(_) => Ok(EXIT_ERROR),
                Err(e) => Err(io_error(Path::new("<stdout>"))(e)),
            }
        }
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        e.exit_code()
    })
}
