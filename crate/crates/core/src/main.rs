use std::process::ExitCode;

use clap::Parser;
use hopcolor::cli::{execute, exit_code, trace_dump, Cli};
use hopcolor::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(o.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NonTermination { trace, .. } = &e {
                eprint!("{}", trace_dump(trace));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
