use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lattice_cft::error::CliError;
use lattice_cft::report::{render_error, EXIT_INPUT_ERROR};
use lattice_cft::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.render().to_string();
            let command = std::env::args().skip(1).find(|a| !a.starts_with('-')).unwrap_or_default();
            print!("{}", render_error(&command, &CliError::parse(detail.trim_end())));
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    std::panic::set_hook(Box::new(|_| {}));
    let (code, text) = run(&config);
    let written = match &config.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT_ERROR as u8);
    }
    ExitCode::from(code as u8)
}
