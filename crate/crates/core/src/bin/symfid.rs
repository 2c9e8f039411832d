use std::process::ExitCode;

fn main() -> ExitCode {
    symfid::cli::main()
}
