use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;
use codeword_lab_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = BufWriter::new(io::stdout());
    match codeword_lab_cli::run(&cli, &mut out) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            drop(out);
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
