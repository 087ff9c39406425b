use std::process::ExitCode;

use wgdp_cli::{parse_args, run, CliError};

fn main() -> ExitCode {
    let result = parse_args(std::env::args_os()).and_then(|config| run(&config));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Clap(e)) => e.exit(),
        Err(e) => {
            eprintln!("wgdp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
