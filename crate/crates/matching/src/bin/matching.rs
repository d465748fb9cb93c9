use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    ExitCode::from(matching_entropy::cli::main_with_args(std::env::args_os(), &mut out))
}
