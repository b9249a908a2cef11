use std::process::ExitCode;

use clap::Parser;
use leray_cli::commands::Format;
use leray_cli::{run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = run(&cli);
    match &outcome {
        Outcome::Report(report) => match cli.format {
            Format::Table => print!("{}", report.to_table()),
            Format::Records => println!("{}", report.to_json()),
        },
        Outcome::Failed(m) => eprintln!("verification failed: {m}"),
        Outcome::Invalid(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(outcome.exit_code() as u8)
}
