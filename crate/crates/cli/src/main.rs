use std::process::ExitCode;

use clap::error::ErrorKind;

fn main() -> ExitCode {
    let (outcome, pretty) = match blockatlas_cli::run_args(std::env::args_os()) {
        Ok(r) => r,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => (blockatlas_cli::usage_error(&e), false),
    };
    println!("{}", outcome.render(pretty));
    ExitCode::from(outcome.code as u8)
}
