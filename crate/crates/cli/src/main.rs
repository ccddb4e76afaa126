use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ensdist_cli::{error::EXIT_PARSE, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::parse(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json_line());
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => {
            let _ = out.flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("{}", e.to_json_line());
            ExitCode::from(e.code as u8)
        }
    }
}
