use std::io::{ErrorKind, Write};
use std::process::ExitCode;

use clap::Parser;
use ecalc::commands::{run, Cli};
use ecalc::report::EXIT_INPUT;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("ECALC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("ecalc {}: {e}", cli.command.name());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    let text = if cli.json { report.to_json() + "\n" } else { report.to_text() };
    if let Err(e) = std::io::stdout().lock().write_all(text.as_bytes()) {
        // a closed pipe (`ecalc … | head`) is not worth a panic
        if e.kind() != ErrorKind::BrokenPipe {
            eprintln!("cannot write the report: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    ExitCode::from(report.status as u8)
}
