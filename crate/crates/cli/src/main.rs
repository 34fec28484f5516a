use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use granule_cli::app::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.stdout.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("granule: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
