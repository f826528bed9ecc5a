use std::io;
use std::process::ExitCode;

use clap::Parser;
use quad_core::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = run(cli, &mut io::stdout(), &mut io::stderr());
    ExitCode::from(code as u8)
}
