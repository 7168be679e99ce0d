use std::process::ExitCode;

use clap::Parser;
use mcdef_cli::{execute, Cli};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (code, out) = execute(&cli, args);
    match out {
        Ok(text) => match &cli.output {
            Some(path) => {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            None => print!("{text}"),
        },
        Err(msg) => eprintln!("error: {msg}"),
    }
    ExitCode::from(code as u8)
}
