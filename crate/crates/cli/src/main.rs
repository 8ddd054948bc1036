mod args;
mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match commands::run(&cli.command) {
        Ok(commands::Output::Report(mut report)) => {
            if cli.common.timing {
                report.timing_ms = Some(started.elapsed().as_secs_f64() * 1e3);
            }
            let text = match cli.common.format {
                Format::Json => report.render_json(),
                Format::Table => report.render_table(),
            };
            print!("{text}");
            ExitCode::from(report.status.exit_code() as u8)
        }
        Ok(commands::Output::Document(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
