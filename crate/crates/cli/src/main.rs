use std::process::ExitCode;

fn main() -> ExitCode {
    dppr_cli::main_from(std::env::args_os())
}
