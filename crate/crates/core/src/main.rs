use std::io;
use std::process::ExitCode;

use clap::Parser;
use hof::cli::{circuit_eval, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli, circuit_eval, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
