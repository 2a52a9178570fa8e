use std::io::Write;
use std::process::ExitCode;

use conefix_cli::{parse_args, run, EXIT_USAGE};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os()) {
        Ok(config) => config,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let outcome = run(&config);
    if config.output.is_none() && !outcome.report.is_empty() {
        let _ = std::io::stdout().write_all(outcome.report.as_bytes());
    }
    if let Some(msg) = &outcome.message {
        eprintln!("error: {msg}");
    }
    ExitCode::from(outcome.code as u8)
}
