use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gentrib_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe is not worth a panic.
            let _ = stdout.write_all(out.text(cli.format()).as_bytes());
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("gentrib: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
