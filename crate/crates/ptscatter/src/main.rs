use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(ptscatter::cli::main_entry())
}
