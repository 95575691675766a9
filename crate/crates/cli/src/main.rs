use std::process::ExitCode;

use clap::Parser;
use genconn_cli::{run, Cli, Status};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.status as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(Status::Error as u8)
        }
    }
}
