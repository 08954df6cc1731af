use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = cohpbw::cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match cohpbw::cli::run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(&e)
        }
    }
}
