//! `stirap` — batch CLI for STIRAP simulation and analysis.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 numeric failure.

use clap::error::ErrorKind;
use clap::Parser;
use stirap_cli::Cli;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = stirap_cli::run(&cli) {
        eprintln!("error: {e:#}");
        let code = if e.downcast_ref::<stirap_core::Error>().is_some() {
            2
        } else {
            1
        };
        std::process::exit(code);
    }
}
