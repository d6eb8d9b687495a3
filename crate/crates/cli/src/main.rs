use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cospec_cli::run(std::env::args_os()).code())
}
