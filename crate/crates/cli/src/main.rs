use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(gcap_cli::run(std::env::args_os()))
}
