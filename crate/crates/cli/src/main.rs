use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(currkg_cli::main_with_args(std::env::args_os()))
}
