use std::process::ExitCode;

fn main() -> ExitCode {
    cdyn::cli::run(std::env::args_os())
}
