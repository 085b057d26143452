use std::process::ExitCode;

fn main() -> ExitCode {
    secrelay::cli::main()
}
