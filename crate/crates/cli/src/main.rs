use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use di_cli::{degree_cap_from_env, run, summary, Cli, DEGREE_CAP_VAR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = match degree_cap_from_env(std::env::var(DEGREE_CAP_VAR).ok()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let report = run(&cli, cap);
    let elapsed = start.elapsed();
    let json = report.to_json();
    let code = report.exit_code() as u8;

    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{json}"),
    }
    if cli.pretty {
        // keep stdout pure JSON unless the report went to a file
        let text = format!("{}\nelapsed: {:.3} s", summary(&report), elapsed.as_secs_f64());
        if cli.out.is_some() {
            println!("{text}");
        } else {
            eprintln!("{text}");
        }
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(code)
}
