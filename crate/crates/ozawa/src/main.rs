use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ozawa::cli::Cli::parse();
    let stdout = std::io::stdout();
    match ozawa::cli::run(cli, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(ozawa::cli::EXIT_USAGE)
        }
    }
}
